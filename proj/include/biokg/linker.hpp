#pragma once

#include <cstddef>
#include <vector>

#include "biokg/graph_store.hpp"
#include "biokg/ingest.hpp"

namespace biokg {

// Counters shared by every linking stage. Stages only touch the fields that
// apply to them.
struct LinkReport {
  std::size_t nodes_created = 0;  // concept nodes
  std::size_t edges_created = 0;
  std::size_t misses = 0;
  std::size_t ambiguities = 0;
  std::size_t mentions = 0;
  std::size_t facts = 0;
  std::size_t rows_skipped = 0;

  LinkReport& operator+=(const LinkReport& o);
  bool operator==(const LinkReport&) const = default;
};

Json to_json(const LinkReport& r);

// One `concept` node per distinct (kind, canonical), id
// concept:<kind>:<canonical>, and one has_concept edge per entity occurrence.
LinkReport materialize_concepts(const std::vector<EntityDocument>& entities, GraphStore& graph);

// Turns relations into edges. Accession targets must exist; label targets
// must match exactly one node of the target collection by case-insensitive
// label/synonym. Misses and ambiguities are counted and skipped.
LinkReport resolve_relations(const std::vector<EntityDocument>& entities, GraphStore& graph);

}  // namespace biokg
