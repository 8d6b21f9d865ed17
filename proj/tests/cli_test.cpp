#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "biokg/cli.hpp"
#include "fixture_pipeline.hpp"

namespace biokg {
namespace {

using testkit::fixture_dir;
using testkit::TempDir;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const char* rel) { return (fixture_dir() / rel).string(); }

// Drops per-step timing lines, which vary between runs.
std::string without_timings(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.rfind("#   ", 0) != 0) kept += line + "\n";
  }
  return kept;
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    graph = (tmp.path() / "graph").string();
    for (const auto& [desc, recs] : std::vector<std::pair<const char*, const char*>>{
             {"descriptors/uniprot.descriptor", "records/uniprot.jsonl"},
             {"descriptors/cazy.descriptor", "records/cazy.jsonl"},
             {"descriptors/compound.descriptor", "records/compounds.jsonl"}}) {
      const auto r = run({"ingest", "--graph", graph, "--descriptor", fx(desc), "--input", fx(recs)});
      ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    }
    ASSERT_EQ(run({"docs", "--graph", graph, "--input", fx("documents")}).code, cli::kExitOk);
    ASSERT_EQ(run({"link", "--graph", graph}).code, cli::kExitOk);
  }

  TempDir tmp;
  std::string graph;
};

TEST_F(CliPipeline, TrehaloseQueryMatchesGolden) {
  const auto golden = testkit::read_text(std::filesystem::path(BIOKG_GOLDEN_DIR) /
                                         "trehalose_query.txt");
  for (bool parallel : {false, true}) {
    std::vector<std::string> args{"query", "--graph", graph, "--workflow",
                                  fx("workflows/trehalose.workflow")};
    if (parallel) args.push_back("--parallel");
    const auto r = run(args);
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(without_timings(r.out), golden);
  }
}

TEST_F(CliPipeline, QueryWritesJsonLines) {
  const auto out = (tmp.path() / "rows.jsonl").string();
  ASSERT_EQ(run({"query", "--graph", graph, "--workflow", fx("workflows/trehalose.workflow"),
                 "--output", out})
                .code,
            cli::kExitOk);
  std::ifstream in(out);
  std::string line;
  std::vector<std::string> ids;
  while (std::getline(in, line)) ids.push_back(Json::parse(line).at("id"));
  EXPECT_EQ(ids, (std::vector<std::string>{"uniprot:uniprot:FXU001", "uniprot:uniprot:FXU002"}));
}

TEST_F(CliPipeline, StatsMatchManifestAndRelinkIsIdempotent) {
  const auto before = run({"stats", "--graph", graph, "--json"});
  ASSERT_EQ(before.code, cli::kExitOk);
  const auto stats = Json::parse(before.out);
  const auto manifest = testkit::load_manifest();
  EXPECT_EQ(stats.at("node_count"), manifest.at("stats").at("node_count"));
  EXPECT_EQ(stats.at("edge_count"), manifest.at("stats").at("edge_count"));

  ASSERT_EQ(run({"link", "--graph", graph}).code, cli::kExitOk);
  ASSERT_EQ(run({"ingest", "--graph", graph, "--descriptor", fx("descriptors/cazy.descriptor"),
                 "--input", fx("records/cazy.jsonl")})
                .code,
            cli::kExitOk);
  EXPECT_EQ(run({"stats", "--graph", graph, "--json"}).out, before.out);
}

TEST_F(CliPipeline, ExportReloadsWithSameStats) {
  const auto copy = (tmp.path() / "copy").string();
  ASSERT_EQ(run({"export", "--graph", graph, "--out", copy}).code, cli::kExitOk);
  EXPECT_EQ(run({"stats", "--graph", copy}).out, run({"stats", "--graph", graph}).out);
}

TEST_F(CliPipeline, AnalyticsPrintsSummary) {
  const auto r = run({"analytics", "degree", "--graph", graph, "--collection", "uniprot"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("degree: 12 nodes"), std::string::npos);
  const auto c = run({"analytics", "clusters", "--graph", graph, "--seed", "5"});
  ASSERT_EQ(c.code, cli::kExitOk);
  EXPECT_EQ(c.out, run({"analytics", "clusters", "--graph", graph, "--seed", "5"}).out);
  EXPECT_EQ(run({"analytics", "pagerank", "--graph", graph}).code, cli::kExitValidation);
}

TEST_F(CliPipeline, LockedGraphIsAnIoError) {
  std::ofstream(std::filesystem::path(graph) / ".lock") << "1";
  EXPECT_EQ(run({"link", "--graph", graph}).code, cli::kExitIo);
}

TEST(Cli, StatsOnEmptyDirectory) {
  TempDir tmp;
  const auto r = run({"stats", "--graph", tmp.path().string()});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("nodes: 0"), std::string::npos);
  EXPECT_NE(r.out.find("edges: 0"), std::string::npos);
}

TEST(Cli, GraphFromEnvironment) {
  TempDir tmp;
  ::setenv(cli::kGraphEnv, tmp.path().string().c_str(), 1);
  const auto r = run({"stats"});
  ::unsetenv(cli::kGraphEnv);
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(run({"stats"}).code, cli::kExitValidation);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitValidation);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"stats", "--graph", "x", "--bogus"}).code, cli::kExitValidation);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, CyclicWorkflowIsRejected) {
  TempDir tmp;
  const auto wf = tmp.path() / "cycle.workflow";
  std::ofstream(wf) << R"({"steps": [
      {"id": "a", "op": "traverse", "inputs": ["b"]},
      {"id": "b", "op": "traverse", "inputs": ["a"], "output": true}]})";
  const auto r = run({"query", "--graph", tmp.path().string(), "--workflow", wf.string()});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("cycle"), std::string::npos) << r.err;
}

TEST(Cli, MissingFilesAreIoErrors) {
  TempDir tmp;
  const auto graph = tmp.path().string();
  EXPECT_EQ(run({"query", "--graph", graph, "--workflow", "/nonexistent.workflow"}).code,
            cli::kExitIo);
  EXPECT_EQ(run({"ingest", "--graph", graph, "--descriptor", fx("descriptors/cazy.descriptor"),
                 "--input", "/nonexistent.jsonl"})
                .code,
            cli::kExitIo);
  EXPECT_EQ(run({"docs", "--graph", graph, "--input", "/nonexistent"}).code, cli::kExitIo);
}

TEST(Cli, BadDescriptorIsValidationError) {
  TempDir tmp;
  const auto d = tmp.path() / "bad.descriptor";
  std::ofstream(d) << R"({"source_name": "s"})";
  EXPECT_EQ(run({"ingest", "--graph", tmp.path().string(), "--descriptor", d.string(), "--input",
                 fx("records/cazy.jsonl")})
                .code,
            cli::kExitValidation);
}

}  // namespace
}  // namespace biokg
