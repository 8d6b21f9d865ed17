#include <gtest/gtest.h>

#include "biokg/workflow.hpp"
#include "fixture_pipeline.hpp"
#include "oracles.hpp"

namespace biokg {
namespace {

using testkit::fixture_dir;
using testkit::read_text;

class FixtureGraphTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fx = new testkit::FixtureGraph(testkit::build_fixture_graph());
    manifest = new Json(testkit::load_manifest());
  }
  static void TearDownTestSuite() {
    delete fx;
    delete manifest;
  }

  static std::vector<std::string> run(const char* workflow, ExecutionMode mode) {
    const auto wf = parse_workflow(read_text(fixture_dir() / "workflows" / workflow));
    const auto res = execute(wf, fx->graph, mode);
    std::vector<std::string> out;
    for (const auto& id : res.results.at(res.trace.outputs.front()).node_ids) {
      out.push_back(id.str());
    }
    return out;
  }

  static testkit::FixtureGraph* fx;
  static Json* manifest;
};

testkit::FixtureGraph* FixtureGraphTest::fx = nullptr;
Json* FixtureGraphTest::manifest = nullptr;

TEST_F(FixtureGraphTest, StatsMatchManifest) {
  const auto s = fx->graph.stats();
  const auto& want = manifest->at("stats");
  EXPECT_EQ(s.node_count, want.at("node_count").get<std::size_t>());
  EXPECT_EQ(s.edge_count, want.at("edge_count").get<std::size_t>());
  for (const auto& [c, n] : want.at("per_collection").items()) {
    EXPECT_EQ(s.per_collection.at(c), n.get<std::size_t>()) << c;
  }
  for (const auto& [k, n] : want.at("per_kind").items()) {
    EXPECT_EQ(s.per_kind.at(k), n.get<std::size_t>()) << k;
  }
  EXPECT_EQ(s.per_collection.size(), want.at("per_collection").size());
  EXPECT_EQ(s.per_kind.size(), want.at("per_kind").size());
}

TEST_F(FixtureGraphTest, IngestReportsMatchRecordCounts) {
  const auto& records = manifest->at("records");
  ASSERT_EQ(fx->ingest_reports.size(), 3u);
  EXPECT_EQ(fx->ingest_reports[0].inserted, records.at("uniprot.jsonl").get<std::size_t>());
  EXPECT_EQ(fx->ingest_reports[1].inserted, records.at("cazy.jsonl").get<std::size_t>());
  EXPECT_EQ(fx->ingest_reports[2].inserted, records.at("compounds.jsonl").get<std::size_t>());
  for (const auto& r : fx->ingest_reports) EXPECT_EQ(r.rejected, 0u);
}

TEST_F(FixtureGraphTest, LinkReportsMatchManifest) {
  const auto& link = manifest->at("link");
  EXPECT_EQ(fx->relations.misses, link.at("relation_misses").get<std::size_t>());
  EXPECT_EQ(fx->relations.ambiguities, link.at("relation_ambiguities").get<std::size_t>());
  EXPECT_EQ(fx->gazetteer_entries, link.at("gazetteer_entries").get<std::size_t>());
  EXPECT_EQ(fx->ner.report.mentions, link.at("mentions").get<std::size_t>());
  EXPECT_EQ(fx->ner.report.facts, link.at("facts").get<std::size_t>());
  EXPECT_EQ(fx->ner.report.rows_skipped, link.at("rows_skipped").get<std::size_t>());
  std::set<std::string> predicates;
  for (const auto& f : fx->ner.facts) predicates.insert(f.predicate);
  EXPECT_EQ(predicates, link.at("fact_predicates").get<std::set<std::string>>());
}

TEST_F(FixtureGraphTest, ConceptLabelsMatchManifest) {
  std::set<std::string> labels;
  for (const auto* n : fx->graph.find_nodes(std::string("concept"), std::nullopt)) {
    labels.insert(n->label);
  }
  EXPECT_EQ(labels, manifest->at("concepts").get<std::set<std::string>>());
}

TEST_F(FixtureGraphTest, TrehaloseWorkflowMatchesOracleAndManifest) {
  const auto plain = testkit::to_plain(fx->graph);
  const auto oracle =
      testkit::sources_outside(plain, "compound", "Trehalose", "catalytic_activity", "uniprot", "cazy");
  const auto want = manifest->at("trehalose_workflow").get<std::vector<std::string>>();
  EXPECT_EQ(std::vector<std::string>(oracle.begin(), oracle.end()), want);
  EXPECT_EQ(run("trehalose.workflow", ExecutionMode::sequential), want);
  EXPECT_EQ(run("trehalose.workflow", ExecutionMode::parallel), want);
}

TEST_F(FixtureGraphTest, TrehaloseResultsAreStf0AndTpp1) {
  const auto ids = run("trehalose.workflow", ExecutionMode::sequential);
  ASSERT_EQ(ids.size(), 2u);
  EXPECT_EQ(fx->graph.node(NodeId(ids[0])).label, "Trehalose 2-sulfotransferase");
  EXPECT_EQ(fx->graph.node(NodeId(ids[1])).label, "Probable trehalose-phosphate phosphatase 1");
  // Every excluded Trehalose enzyme really has a CAZy link.
  const auto plain = testkit::to_plain(fx->graph);
  const auto all =
      testkit::sources_outside(plain, "compound", "Trehalose", "catalytic_activity", "uniprot", "none");
  EXPECT_GT(all.size(), ids.size());
  for (const auto& id : all) {
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) continue;
    bool linked = false;
    for (const auto& n : fx->graph.neighbors(NodeId(id))) linked |= n.node->collection == "cazy";
    EXPECT_TRUE(linked) << id;
  }
}

// The seed compound can also be reached through the handbook mention.
TEST_F(FixtureGraphTest, HandbookSeedGivesSameResult) {
  const auto trehalose = fx->graph.find_nodes(std::string("compound"), std::string("Trehalose"));
  ASSERT_EQ(trehalose.size(), 1u);
  bool in_handbook = false;
  for (const auto& n : fx->graph.neighbors(trehalose.front()->id, std::nullopt)) {
    if (n.edge->kind == "mentioned_in" &&
        n.node->properties.contains("doc_id") &&
        n.node->properties.at("doc_id") == "handbook-carbohydrate-engineering") {
      in_handbook = true;
    }
  }
  EXPECT_TRUE(in_handbook);
  EXPECT_EQ(run("trehalose_from_handbook.workflow", ExecutionMode::sequential),
            run("trehalose.workflow", ExecutionMode::sequential));
}

TEST_F(FixtureGraphTest, CooccurrenceIsSymmetricAndSound) {
  const auto problems = testkit::cooccurrence_problems(testkit::to_plain(fx->graph));
  EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(FixturePipeline, RepeatedPassesChangeNothing) {
  const auto once = testkit::build_fixture_graph();
  const auto again = testkit::build_fixture_graph({.ingest_passes = 2, .link_passes = 2});
  EXPECT_EQ(once.graph.stats(), again.graph.stats());
  EXPECT_TRUE(graph_equal(once.graph, again.graph));
}

}  // namespace
}  // namespace biokg
