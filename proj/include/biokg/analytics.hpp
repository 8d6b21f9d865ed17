#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biokg/graph_store.hpp"

namespace biokg {

// In + out edge count per node, optionally only for nodes of `collection`.
// Throws ValidationError for an unregistered collection.
std::map<NodeId, std::size_t> degree_centrality(
    const GraphStore& graph, const std::optional<std::string>& collection = std::nullopt);

// Weakly connected components. Sorted by size descending, then by smallest
// member id; members are in canonical order.
std::vector<std::vector<NodeId>> connected_components(const GraphStore& graph);

// Synchronous label propagation over the undirected simple graph. Nodes start
// with their canonical index as label; each round every node adopts the most
// frequent label among itself and its distinct neighbours, lowest label on
// ties. Stops at a fixpoint or after max_iters rounds. The seed drives the
// visitation shuffle.
struct ClusterResult {
  std::map<NodeId, std::size_t> cluster;  // node -> cluster id (a label)
  std::size_t iterations = 0;
  bool converged = false;
};

ClusterResult label_propagation_clusters(const GraphStore& graph, std::size_t max_iters,
                                         std::uint64_t seed);

}  // namespace biokg
