#pragma once

// Reference implementations used to check the library. They work on plain
// containers and share no code with the code under test.

#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "biokg/graph_store.hpp"

namespace biokg::testkit {

// ---- EC numbers ------------------------------------------------------------

// A decorated EC number and its expected canonical form. Decorations come from
// three families: prefixes, surrounding whitespace and semicolons, and
// trailing '-' fields.
struct EcVariant {
  std::string raw;
  std::string expected;
};

EcVariant random_ec_variant(std::mt19937_64& rng);

// ---- NER -------------------------------------------------------------------

struct OracleMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string key;

  auto operator<=>(const OracleMatch&) const = default;
};

// ASCII case fold, whitespace runs to one space, trimmed.
std::string oracle_normalize(std::string_view s);

// Tries every key at every offset of the normalized text, then keeps the
// leftmost-longest non-overlapping candidates. Spans are original offsets.
std::vector<OracleMatch> naive_scan(const std::set<std::string>& keys, std::string_view text);

// ---- plain graphs ------------------------------------------------------------

struct PlainNode {
  std::string id;
  std::string collection;
  std::string label;
  std::vector<std::string> synonyms;
  Properties properties;
};

struct PlainEdge {
  std::string src;
  std::string dst;
  std::string kind;
  Properties properties;
};

struct PlainGraph {
  std::vector<PlainNode> nodes;
  std::vector<PlainEdge> edges;

  const PlainNode& node(const std::string& id) const;
};

PlainGraph to_plain(const GraphStore& graph);
GraphStore to_graph_store(const PlainGraph& plain);

PlainGraph random_plain_graph(std::mt19937_64& rng, std::size_t max_nodes);

// ---- workflows ---------------------------------------------------------------

struct OracleStep {
  std::string id;
  std::string op;
  std::vector<std::string> inputs;
  Json params = Json::object();
  bool output = false;
};

struct OracleWorkflow {
  std::string name;
  std::vector<OracleStep> steps;  // file order, not necessarily topological
};

OracleWorkflow random_workflow(std::mt19937_64& rng, const PlainGraph& graph,
                               std::size_t max_steps);
std::string to_workflow_text(const OracleWorkflow& wf);

// Evaluates steps whenever all their inputs are known, until none is left.
std::map<std::string, std::set<std::string>> naive_evaluate(const OracleWorkflow& wf,
                                                            const PlainGraph& graph);

// ---- fixture questions -------------------------------------------------------

// Nodes of `source_collection` with a `kind` edge into a node of
// `target_collection` whose label or synonym equals `label`, minus every such
// node with an edge to or from `excluded_collection`.
std::set<std::string> sources_outside(const PlainGraph& graph, const std::string& target_collection,
                                      const std::string& label, const std::string& kind,
                                      const std::string& source_collection,
                                      const std::string& excluded_collection);

// Exhaustive check of cooccurs_with edges against mentioned_in edges: both
// directions present with equal counts, count and segments equal to the
// shared segments, and every pair sharing a segment linked. One line per
// problem; empty when consistent.
std::vector<std::string> cooccurrence_problems(const PlainGraph& graph);

// ---- components --------------------------------------------------------------

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

std::set<std::set<std::string>> union_find_components(const PlainGraph& graph);

}  // namespace biokg::testkit
