#pragma once

// Dictionary NER over document segments, co-occurrence linking, and fact
// extraction from tables.
//
// Matching rule: text and gazetteer keys are compared after case folding and
// whitespace collapsing. A match may not split a word on either side.
// Scanning left to right, the leftmost start wins and, among matches at that
// start, the longest; scanning resumes at the match end.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biokg/document.hpp"
#include "biokg/graph_store.hpp"
#include "biokg/linker.hpp"

namespace biokg {

class Gazetteer {
 public:
  static constexpr std::size_t kDefaultMinLength = 3;

  explicit Gazetteer(std::size_t min_length = kDefaultMinLength);

  // Normalizes `surface`; entries shorter than the minimum length are ignored.
  // Returns whether the surface was accepted.
  bool add(std::string_view surface, const NodeId& id);

  // normalized surface -> ids, ids sorted and unique
  const std::map<std::string, std::vector<NodeId>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t min_length() const { return min_length_; }

  struct Match {
    std::size_t start = 0;  // byte offsets into the original text
    std::size_t end = 0;
    const std::vector<NodeId>* ids = nullptr;
  };

  std::vector<Match> scan(std::string_view text) const;

 private:
  struct TrieNode {
    std::map<char, std::size_t> next;
    bool terminal = false;
  };

  std::size_t min_length_;
  std::map<std::string, std::vector<NodeId>> entries_;
  std::vector<TrieNode> trie_;
};

// Labels and synonyms of every node outside the `document` and `concept`
// collections.
Gazetteer build_gazetteer(const GraphStore& graph,
                          std::size_t min_length = Gazetteer::kDefaultMinLength);

struct CellRef {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const CellRef&) const = default;
};

struct Mention {
  NodeId node_id;
  NodeId segment_id;
  std::size_t start = 0;  // byte span in the segment text (or cell text)
  std::size_t end = 0;
  std::string surface;
  std::optional<CellRef> cell;

  bool operator==(const Mention&) const = default;
};

Json to_json(const Mention& m);

// An ambiguous surface yields one mention per candidate at the same span.
// Tables are scanned cell by cell.
std::vector<Mention> recognize(const DocumentSegment& segment, const Gazetteer& gazetteer);

// mentioned_in edge per mention; for every unordered pair of distinct
// entities sharing a segment, cooccurs_with edges in both directions whose
// `count` property is the number of distinct shared segments.
LinkReport link_mentions(const std::vector<Mention>& mentions, GraphStore& graph);

struct Fact {
  NodeId subject;
  std::string predicate;
  std::string value;
  Provenance provenance;

  bool operator==(const Fact&) const = default;
};

Json to_json(const Fact& f);

// Header -> registered normalized key, else "raw:<header>".
std::string fact_predicate(std::string_view header, const KeyRegistry& keys);

struct FactResult {
  std::vector<Fact> facts;
  std::size_t rows_skipped = 0;
};

// Rows whose column-0 cell resolved to exactly one entity yield one fact per
// (header, value). Facts are stored as `fact` edges entity -> segment and as
// "<predicate>=<value>" entries in the entity's `doc_facts` property.
FactResult extract_facts(const DocumentSegment& table, const std::vector<Mention>& mentions,
                         GraphStore& graph);

struct NerOutput {
  LinkReport report;
  std::vector<Mention> mentions;
  std::vector<Fact> facts;
};

// NER over every stored segment, then link_mentions and extract_facts.
NerOutput run_document_linking(GraphStore& graph, const Gazetteer& gazetteer);

}  // namespace biokg
