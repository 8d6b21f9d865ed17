#include <gtest/gtest.h>

#include "biokg/linker.hpp"
#include "fixture_pipeline.hpp"

namespace biokg {
namespace {

EntityDocument entity(const std::string& acc, const std::string& label,
                      std::vector<ConceptKey> concepts = {}, std::vector<Relation> rels = {}) {
  EntityDocument d;
  d.node = {NodeId::entity("src", "protein", acc), "protein", label, {}, {}};
  d.concepts = std::move(concepts);
  d.relations = std::move(rels);
  d.origin = "src";
  return d;
}

class LinkerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    graph.register_collection("protein");
    graph.register_collection("compound");
  }
  void add(const EntityDocument& d) { graph.upsert_node(d.node); }
  void compound(const std::string& id, const std::string& label,
                std::vector<std::string> synonyms = {}) {
    graph.upsert_node({NodeId("pubchem:compound:" + id), "compound", label, std::move(synonyms), {}});
  }
  GraphStore graph;
};

TEST_F(LinkerTest, NoConceptsGivesZeroReport) {
  const auto a = entity("A", "a");
  add(a);
  EXPECT_EQ(materialize_concepts({a}, graph), LinkReport{});
}

TEST_F(LinkerTest, SharedEcMakesOneConceptAndTwoEdges) {
  const ConceptKey ec{ConceptKind::ec_number(), "2.4.1.245"};
  const auto a = entity("A", "TreT", {ec});
  const auto b = entity("B", "TreT", {ec});
  add(a);
  add(b);
  const auto rep = materialize_concepts({a, b}, graph);
  EXPECT_EQ(rep.nodes_created, 1u);
  EXPECT_EQ(rep.edges_created, 2u);

  const NodeId cid("concept:ec_number:2.4.1.245");
  const Node& c = graph.node(cid);
  EXPECT_EQ(c.collection, "concept");
  EXPECT_EQ(c.properties.at("canonical"), "2.4.1.245");
  EXPECT_EQ(graph.neighbors(cid, KindFilter{{"has_concept"}}, Direction::in).size(), 2u);

  // a -> concept <- b
  bool path = false;
  for (const auto& hop : graph.neighbors(a.node.id, std::nullopt, Direction::out)) {
    for (const auto& back : graph.neighbors(hop.node->id, std::nullopt, Direction::in)) {
      path = path || back.node->id == b.node.id;
    }
  }
  EXPECT_TRUE(path);
  for (const auto& e : graph.edges()) EXPECT_EQ(e.provenance.method, Method::concept_link);
}

TEST_F(LinkerTest, MaterializeIsIdempotent) {
  const auto a = entity("A", "a", {{ConceptKind::taxon(), "83332"}});
  add(a);
  materialize_concepts({a}, graph);
  const auto stats = graph.stats();
  const auto again = materialize_concepts({a}, graph);
  EXPECT_EQ(again.nodes_created, 0u);
  EXPECT_EQ(again.edges_created, 0u);
  EXPECT_EQ(graph.stats(), stats);
}

TEST_F(LinkerTest, RelationWithSingleMatchAddsEdge) {
  compound("1", "Trehalose", {"mycose"});
  const auto a = entity("A", "a", {}, {{"catalytic_activity", "compound", std::nullopt, "MYCOSE"}});
  add(a);
  const auto rep = resolve_relations({a}, graph);
  EXPECT_EQ(rep.edges_created, 1u);
  EXPECT_EQ(rep.misses, 0u);
  ASSERT_EQ(graph.edges().size(), 1u);
  EXPECT_EQ(graph.edges()[0].dst.str(), "pubchem:compound:1");
  EXPECT_EQ(graph.edges()[0].provenance.method, Method::declared);
}

TEST_F(LinkerTest, AbsentLabelIsAMiss) {
  const auto a = entity("A", "a", {}, {{"catalytic_activity", "compound", std::nullopt, "glycogen"}});
  add(a);
  const auto rep = resolve_relations({a}, graph);
  EXPECT_EQ(rep.edges_created, 0u);
  EXPECT_EQ(rep.misses, 1u);
}

TEST_F(LinkerTest, AmbiguousLabelIsSkipped) {
  compound("1", "glucose");
  compound("2", "dextrose", {"Glucose"});
  const auto a = entity("A", "a", {}, {{"catalytic_activity", "compound", std::nullopt, "glucose"}});
  add(a);
  const auto rep = resolve_relations({a}, graph);
  EXPECT_EQ(rep.edges_created, 0u);
  EXPECT_EQ(rep.ambiguities, 1u);
  EXPECT_TRUE(graph.edges().empty());
}

TEST_F(LinkerTest, LabelOutsideTargetCollectionIsAMiss) {
  const auto b = entity("B", "glucose");
  add(b);
  const auto a = entity("A", "a", {}, {{"catalytic_activity", "compound", std::nullopt, "glucose"}});
  add(a);
  EXPECT_EQ(resolve_relations({a}, graph).misses, 1u);
}

TEST_F(LinkerTest, AccessionTargetMustExist) {
  const auto b = entity("B", "b");
  add(b);
  const auto a = entity("A", "a", {},
                        {{"member", "protein", b.node.id, b.node.id.str()},
                         {"member", "protein", NodeId("src:protein:ZZZ"), "ZZZ"}});
  add(a);
  const auto rep = resolve_relations({a}, graph);
  EXPECT_EQ(rep.edges_created, 1u);
  EXPECT_EQ(rep.misses, 1u);
  EXPECT_EQ(resolve_relations({a}, graph).edges_created, 0u);
}

// Bridge property and concept count over the fixture.
TEST(LinkerFixture, BridgeAndConceptCount) {
  const auto fx = testkit::build_fixture_graph();
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& d : fx.entities) {
    for (const auto& c : d.concepts) keys.emplace(c.kind.name(), c.canonical);
  }
  EXPECT_EQ(fx.graph.stats().per_collection.at("concept"), keys.size());

  for (const auto& a : fx.entities) {
    for (const auto& b : fx.entities) {
      if (a.node.id == b.node.id) continue;
      for (const auto& c : a.concepts) {
        if (std::find(b.concepts.begin(), b.concepts.end(), c) == b.concepts.end()) continue;
        const auto cid = NodeId::for_concept(c.kind.name(), c.canonical);
        EXPECT_EQ(fx.graph.edges_between(a.node.id, cid, "has_concept").size(), 1u);
        EXPECT_EQ(fx.graph.edges_between(b.node.id, cid, "has_concept").size(), 1u);
      }
    }
  }
}

}  // namespace
}  // namespace biokg
