#include "biokg/analytics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "biokg/error.hpp"

namespace biokg {

namespace {

// Dense view of the graph: canonical index per node, undirected neighbour
// sets without self loops.
struct DenseGraph {
  std::vector<NodeId> ids;
  std::vector<std::vector<std::size_t>> adj;
};

DenseGraph dense_view(const GraphStore& graph) {
  DenseGraph d;
  std::unordered_map<NodeId, std::size_t> index;
  for (const auto& [id, n] : graph.nodes()) {
    index.emplace(id, d.ids.size());
    d.ids.push_back(id);
  }
  std::vector<std::set<std::size_t>> sets(d.ids.size());
  for (const auto& e : graph.edges()) {
    const auto a = index.at(e.src);
    const auto b = index.at(e.dst);
    if (a == b) continue;
    sets[a].insert(b);
    sets[b].insert(a);
  }
  d.adj.reserve(sets.size());
  for (auto& s : sets) d.adj.emplace_back(s.begin(), s.end());
  return d;
}

}  // namespace

std::map<NodeId, std::size_t> degree_centrality(const GraphStore& graph,
                                                const std::optional<std::string>& collection) {
  if (collection && !graph.has_collection(*collection)) {
    throw ValidationError("unknown collection '" + *collection + "'");
  }
  std::map<NodeId, std::size_t> deg;
  for (const auto& [id, n] : graph.nodes()) {
    if (!collection || n.collection == *collection) deg.emplace(id, 0);
  }
  for (const auto& e : graph.edges()) {
    if (auto it = deg.find(e.src); it != deg.end()) ++it->second;
    if (auto it = deg.find(e.dst); it != deg.end()) ++it->second;
  }
  return deg;
}

std::vector<std::vector<NodeId>> connected_components(const GraphStore& graph) {
  const auto d = dense_view(graph);
  std::vector<std::size_t> comp(d.ids.size(), SIZE_MAX);
  std::vector<std::vector<NodeId>> out;
  for (std::size_t start = 0; start < d.ids.size(); ++start) {
    if (comp[start] != SIZE_MAX) continue;
    const std::size_t c = out.size();
    std::vector<std::size_t> stack{start};
    std::vector<std::size_t> members;
    comp[start] = c;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (auto w : d.adj[v]) {
        if (comp[w] == SIZE_MAX) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    std::vector<NodeId> ids;
    ids.reserve(members.size());
    for (auto m : members) ids.push_back(d.ids[m]);
    out.push_back(std::move(ids));
  }
  // Discovery order already follows the smallest member, so a stable sort by
  // size gives the documented order.
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

ClusterResult label_propagation_clusters(const GraphStore& graph, std::size_t max_iters,
                                         std::uint64_t seed) {
  if (max_iters == 0) throw ValidationError("max_iters must be >= 1");
  const auto d = dense_view(graph);
  const std::size_t n = d.ids.size();

  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<std::size_t> order(labels);
  std::mt19937_64 rng(seed);

  ClusterResult res;
  std::vector<std::size_t> next(n);
  std::map<std::size_t, std::size_t> counts;
  while (res.iterations < max_iters) {
    ++res.iterations;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto v : order) {
      counts.clear();
      ++counts[labels[v]];
      for (auto w : d.adj[v]) ++counts[labels[w]];
      std::size_t best = labels[v];
      std::size_t best_count = 0;
      for (const auto& [label, c] : counts) {  // ascending label: first max wins
        if (c > best_count) {
          best = label;
          best_count = c;
        }
      }
      next[v] = best;
    }
    if (next == labels) {
      res.converged = true;
      break;
    }
    labels.swap(next);
  }
  for (std::size_t i = 0; i < n; ++i) res.cluster.emplace(d.ids[i], labels[i]);
  return res;
}

}  // namespace biokg
