#pragma once

// In-memory property graph. Every node belongs to exactly one registered
// collection; every edge is directed and carries provenance.
//
// Concurrency: the store starts in build mode, where a single writer may
// mutate it. freeze() switches it to read-only mode permanently; after that
// every const member is safe to call from many threads and every mutator
// throws StateError.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace biokg {

using Json = nlohmann::json;

// Property values are strings, numbers, or lists of those.
using Properties = std::map<std::string, Json>;

class NodeId {
 public:
  NodeId() = default;
  // Throws ValidationError unless `value` is non-empty, whitespace-free and
  // has at least two ':' separators.
  explicit NodeId(std::string value);

  static bool is_valid(std::string_view value);

  static NodeId entity(std::string_view source, std::string_view collection,
                       std::string_view accession);
  static NodeId for_concept(std::string_view kind, std::string_view canonical);
  static NodeId segment(std::string_view doc_id, std::size_t index);

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const NodeId&) const = default;

 private:
  std::string value_;
};

namespace edge_kind {
inline constexpr std::string_view kHasConcept = "has_concept";
inline constexpr std::string_view kMentionedIn = "mentioned_in";
inline constexpr std::string_view kCooccursWith = "cooccurs_with";
inline constexpr std::string_view kFact = "fact";
}  // namespace edge_kind

namespace collection_name {
inline constexpr std::string_view kConcept = "concept";
inline constexpr std::string_view kDocument = "document";
}  // namespace collection_name

enum class Method { declared, concept_link, ner, cooccurrence, fact };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct Provenance {
  std::string origin;
  std::string locator;
  Method method = Method::declared;

  bool operator==(const Provenance&) const = default;
};

struct Node {
  NodeId id;
  std::string collection;
  std::string label;
  std::vector<std::string> synonyms;
  Properties properties;

  bool operator==(const Node&) const = default;
};

struct Edge {
  NodeId src;
  NodeId dst;
  std::string kind;
  Properties properties;
  Provenance provenance;

  bool operator==(const Edge&) const = default;
};

// (src, dst, kind, canonical properties). Provenance is not part of it.
std::string edge_key(const Edge& e);

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::map<std::string, std::size_t> per_collection;
  std::map<std::string, std::size_t> per_kind;

  bool operator==(const GraphStats&) const = default;
};

Json to_json(const GraphStats& s);

enum class UpsertResult { inserted, merged };
enum class AddResult { inserted, duplicate };
enum class Direction { out, in, both };

Direction parse_direction(std::string_view s);

using KindFilter = std::optional<std::set<std::string>>;

struct Neighbor {
  const Edge* edge;
  const Node* node;  // far end
};

// Normalized property keys shared by every descriptor. Keys are snake_case.
class KeyRegistry {
 public:
  KeyRegistry();

  // Throws ValidationError for a key that is not snake_case.
  void add(const std::string& key);
  bool contains(const std::string& key) const { return keys_.count(key) != 0; }
  const std::set<std::string>& keys() const { return keys_; }

 private:
  std::set<std::string> keys_;
};

class GraphStore {
 public:
  GraphStore();

  void register_collection(const std::string& name);
  bool has_collection(const std::string& name) const;
  const std::set<std::string>& collections() const { return collections_; }

  KeyRegistry& keys();
  const KeyRegistry& keys() const { return keys_; }

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  // New id: stored verbatim (duplicate synonyms dropped). Existing id:
  // synonyms and property values set-unioned, label kept.
  UpsertResult upsert_node(Node node);

  // Throws NotFoundError naming the missing endpoint.
  AddResult add_edge(Edge edge);

  // Replaces the properties of a stored edge. `existing` must match a stored
  // edge by edge_key(); the updated key may not collide with another edge.
  void update_edge_properties(const Edge& existing, Properties properties);

  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
  const Node* find(const NodeId& id) const;
  const Node& node(const NodeId& id) const;  // throws NotFoundError

  // Incident edges matching the filter, ordered by far-end id, then kind,
  // then insertion order.
  std::vector<Neighbor> neighbors(const NodeId& id, const KindFilter& kinds = std::nullopt,
                                  Direction direction = Direction::both) const;

  // Case-insensitive exact match on label or any synonym, intersected with
  // the collection filter. At least one criterion is required.
  std::vector<const Node*> find_nodes(const std::optional<std::string>& collection,
                                      const std::optional<std::string>& label) const;

  std::vector<const Edge*> edges_between(const NodeId& src, const NodeId& dst,
                                         std::string_view kind) const;

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  GraphStats stats() const;

 private:
  void require_build_mode(const char* op) const;
  void index_surface(const std::string& surface, const NodeId& id);

  bool frozen_ = false;
  std::set<std::string> collections_;
  KeyRegistry keys_;
  std::map<NodeId, Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> edge_index_;
  std::map<NodeId, std::vector<std::size_t>> out_;
  std::map<NodeId, std::vector<std::size_t>> in_;
  std::unordered_map<std::string, std::set<NodeId>> surface_index_;
  std::map<std::string, std::size_t> per_collection_;
  std::map<std::string, std::size_t> per_kind_;
};

// Same node set with equal contents and the same edge set (by edge_key and
// provenance).
bool graph_equal(const GraphStore& a, const GraphStore& b);

}  // namespace biokg

template <>
struct std::hash<biokg::NodeId> {
  std::size_t operator()(const biokg::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
