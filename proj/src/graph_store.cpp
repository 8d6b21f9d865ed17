#include "biokg/graph_store.hpp"

#include <algorithm>
#include <tuple>

#include "biokg/error.hpp"
#include "biokg/text.hpp"

namespace biokg {

namespace {

// Keys the pipeline itself writes onto nodes.
const char* const kBuiltinKeys[] = {"doc_id",        "doc_title", "segment_kind",
                                    "segment_index", "text",      "table",
                                    "doc_facts",     "concept_kind", "canonical"};

std::vector<Json> flatten(const Json& v) {
  if (v.is_array()) return std::vector<Json>(v.begin(), v.end());
  return {v};
}

// Set-union of two property values. Unchanged when `incoming` adds nothing,
// otherwise the sorted union, so the result does not depend on arrival order.
Json merge_values(const Json& current, const Json& incoming) {
  auto elems = flatten(current);
  bool grew = false;
  for (const auto& v : flatten(incoming)) {
    if (std::find(elems.begin(), elems.end(), v) == elems.end()) {
      elems.push_back(v);
      grew = true;
    }
  }
  if (!grew) return current;
  std::sort(elems.begin(), elems.end());
  return Json(elems);
}

std::vector<std::string> dedupe_folded(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : in) {
    if (seen.insert(text::fold_case(s)).second) out.push_back(s);
  }
  return out;
}

}  // namespace

NodeId::NodeId(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw ValidationError("malformed node id '" + value_ + "'");
}

bool NodeId::is_valid(std::string_view value) {
  if (value.empty()) return false;
  std::size_t colons = 0;
  for (char c : value) {
    if (text::is_space(c)) return false;
    if (c == ':') ++colons;
  }
  return colons >= 2;
}

NodeId NodeId::entity(std::string_view source, std::string_view collection,
                      std::string_view accession) {
  std::string v;
  v.append(source).append(":").append(collection).append(":").append(accession);
  return NodeId(std::move(v));
}

NodeId NodeId::for_concept(std::string_view kind, std::string_view canonical) {
  std::string v = "concept:";
  v.append(kind).append(":");
  for (char c : canonical) v.push_back(text::is_space(c) ? '_' : c);
  return NodeId(std::move(v));
}

NodeId NodeId::segment(std::string_view doc_id, std::size_t index) {
  std::string v = "doc:";
  v.append(doc_id).append(":").append(std::to_string(index));
  return NodeId(std::move(v));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::declared: return "declared";
    case Method::concept_link: return "concept";
    case Method::ner: return "ner";
    case Method::cooccurrence: return "cooccurrence";
    case Method::fact: return "fact";
  }
  return "declared";
}

Method parse_method(std::string_view s) {
  if (s == "declared") return Method::declared;
  if (s == "concept") return Method::concept_link;
  if (s == "ner") return Method::ner;
  if (s == "cooccurrence") return Method::cooccurrence;
  if (s == "fact") return Method::fact;
  throw ValidationError("unknown provenance method '" + std::string(s) + "'");
}

Direction parse_direction(std::string_view s) {
  if (s == "out") return Direction::out;
  if (s == "in") return Direction::in;
  if (s == "both") return Direction::both;
  throw ValidationError("unknown direction '" + std::string(s) + "'");
}

std::string edge_key(const Edge& e) {
  Json props(Json::value_t::object);
  for (const auto& [k, v] : e.properties) props[k] = v;
  std::string key = e.src.str();
  key.push_back('\x1f');
  key += e.dst.str();
  key.push_back('\x1f');
  key += e.kind;
  key.push_back('\x1f');
  key += props.dump();
  return key;
}

Json to_json(const GraphStats& s) {
  return Json{{"node_count", s.node_count},
              {"edge_count", s.edge_count},
              {"per_collection", s.per_collection},
              {"per_kind", s.per_kind}};
}

KeyRegistry::KeyRegistry() {
  for (const char* k : kBuiltinKeys) keys_.insert(k);
}

void KeyRegistry::add(const std::string& key) {
  if (!text::is_snake_key(key)) {
    throw ValidationError("normalized key '" + key + "' is not snake_case");
  }
  keys_.insert(key);
}

GraphStore::GraphStore() = default;

void GraphStore::require_build_mode(const char* op) const {
  if (frozen_) throw StateError(std::string(op) + " on a frozen graph");
}

void GraphStore::register_collection(const std::string& name) {
  require_build_mode("register_collection");
  if (name.empty() || name.find(':') != std::string::npos ||
      std::any_of(name.begin(), name.end(), text::is_space)) {
    throw ValidationError("invalid collection name '" + name + "'");
  }
  collections_.insert(name);
}

bool GraphStore::has_collection(const std::string& name) const {
  return collections_.count(name) != 0;
}

KeyRegistry& GraphStore::keys() {
  require_build_mode("key registration");
  return keys_;
}

void GraphStore::index_surface(const std::string& surface, const NodeId& id) {
  surface_index_[text::fold_case(surface)].insert(id);
}

UpsertResult GraphStore::upsert_node(Node node) {
  require_build_mode("upsert_node");
  if (!NodeId::is_valid(node.id.str())) {
    throw ValidationError("malformed node id '" + node.id.str() + "'");
  }
  if (!has_collection(node.collection)) {
    throw ValidationError("node " + node.id.str() + ": unregistered collection '" +
                          node.collection + "'");
  }
  if (text::trim(node.label).empty()) {
    throw ValidationError("node " + node.id.str() + ": empty label");
  }

  auto it = nodes_.find(node.id);
  if (it == nodes_.end()) {
    node.synonyms = dedupe_folded(node.synonyms);
    index_surface(node.label, node.id);
    for (const auto& s : node.synonyms) index_surface(s, node.id);
    ++per_collection_[node.collection];
    const NodeId id = node.id;
    nodes_.emplace(id, std::move(node));
    return UpsertResult::inserted;
  }

  Node& cur = it->second;
  if (cur.collection != node.collection) {
    throw ValidationError("node " + node.id.str() + ": collection conflict '" +
                          cur.collection + "' vs '" + node.collection + "'");
  }
  std::set<std::string> folded;
  for (const auto& s : cur.synonyms) folded.insert(text::fold_case(s));
  bool grew = false;
  for (const auto& s : node.synonyms) {
    if (folded.insert(text::fold_case(s)).second) {
      cur.synonyms.push_back(s);
      index_surface(s, cur.id);
      grew = true;
    }
  }
  if (grew) std::sort(cur.synonyms.begin(), cur.synonyms.end());
  for (auto& [key, value] : node.properties) {
    auto pit = cur.properties.find(key);
    if (pit == cur.properties.end()) {
      cur.properties.emplace(key, std::move(value));
    } else {
      pit->second = merge_values(pit->second, value);
    }
  }
  return UpsertResult::merged;
}

AddResult GraphStore::add_edge(Edge edge) {
  require_build_mode("add_edge");
  for (const NodeId* end : {&edge.src, &edge.dst}) {
    if (!contains(*end)) {
      throw NotFoundError("dangling edge endpoint: node " + end->str() + " does not exist");
    }
  }
  if (edge.kind.empty()) throw ValidationError("edge kind must be non-empty");
  if (edge.provenance.origin.empty()) throw ValidationError("edge provenance origin is empty");

  auto key = edge_key(edge);
  if (edge_index_.count(key)) return AddResult::duplicate;
  const std::size_t idx = edges_.size();
  edge_index_.emplace(std::move(key), idx);
  out_[edge.src].push_back(idx);
  in_[edge.dst].push_back(idx);
  ++per_kind_[edge.kind];
  edges_.push_back(std::move(edge));
  return AddResult::inserted;
}

void GraphStore::update_edge_properties(const Edge& existing, Properties properties) {
  require_build_mode("update_edge_properties");
  auto it = edge_index_.find(edge_key(existing));
  if (it == edge_index_.end()) {
    throw NotFoundError("no stored edge " + existing.src.str() + " -> " + existing.dst.str() +
                        " (" + existing.kind + ") with the given properties");
  }
  const std::size_t idx = it->second;
  Edge updated = edges_[idx];
  updated.properties = std::move(properties);
  auto new_key = edge_key(updated);
  if (new_key == it->first) return;
  if (edge_index_.count(new_key)) {
    throw ValidationError("edge property update collides with an existing edge " +
                          existing.src.str() + " -> " + existing.dst.str());
  }
  edge_index_.erase(it);
  edge_index_.emplace(std::move(new_key), idx);
  edges_[idx] = std::move(updated);
}

const Node* GraphStore::find(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node& GraphStore::node(const NodeId& id) const {
  const Node* n = find(id);
  if (!n) throw NotFoundError("node " + id.str() + " not found");
  return *n;
}

std::vector<Neighbor> GraphStore::neighbors(const NodeId& id, const KindFilter& kinds,
                                            Direction direction) const {
  if (!contains(id)) throw NotFoundError("node " + id.str() + " not found");

  std::vector<std::pair<std::size_t, bool>> hits;  // (edge index, outgoing)
  auto collect = [&](const std::map<NodeId, std::vector<std::size_t>>& adj, bool outgoing) {
    auto it = adj.find(id);
    if (it == adj.end()) return;
    for (std::size_t idx : it->second) {
      if (kinds && !kinds->count(edges_[idx].kind)) continue;
      hits.emplace_back(idx, outgoing);
    }
  };
  if (direction != Direction::in) collect(out_, true);
  if (direction != Direction::out) collect(in_, false);

  std::vector<Neighbor> result;
  result.reserve(hits.size());
  for (auto [idx, outgoing] : hits) {
    const Edge& e = edges_[idx];
    result.push_back({&e, &nodes_.at(outgoing ? e.dst : e.src)});
  }
  std::stable_sort(result.begin(), result.end(), [](const Neighbor& a, const Neighbor& b) {
    return std::tie(a.node->id, a.edge->kind) < std::tie(b.node->id, b.edge->kind);
  });
  return result;
}

std::vector<const Node*> GraphStore::find_nodes(const std::optional<std::string>& collection,
                                                const std::optional<std::string>& label) const {
  if (!collection && !label) {
    throw ValidationError("find_nodes requires a collection or a label criterion");
  }
  std::vector<const Node*> out;
  if (label) {
    auto it = surface_index_.find(text::fold_case(*label));
    if (it == surface_index_.end()) return out;
    for (const auto& id : it->second) {
      const Node& n = nodes_.at(id);
      if (!collection || n.collection == *collection) out.push_back(&n);
    }
    return out;
  }
  for (const auto& [id, n] : nodes_) {
    if (n.collection == *collection) out.push_back(&n);
  }
  return out;
}

std::vector<const Edge*> GraphStore::edges_between(const NodeId& src, const NodeId& dst,
                                                   std::string_view kind) const {
  std::vector<const Edge*> out;
  auto it = out_.find(src);
  if (it == out_.end()) return out;
  for (std::size_t idx : it->second) {
    const Edge& e = edges_[idx];
    if (e.dst == dst && e.kind == kind) out.push_back(&e);
  }
  return out;
}

GraphStats GraphStore::stats() const {
  GraphStats s;
  s.node_count = nodes_.size();
  s.edge_count = edges_.size();
  for (const auto& [c, n] : per_collection_) {
    if (n) s.per_collection[c] = n;
  }
  for (const auto& [k, n] : per_kind_) {
    if (n) s.per_kind[k] = n;
  }
  return s;
}

bool graph_equal(const GraphStore& a, const GraphStore& b) {
  if (a.nodes() != b.nodes()) return false;
  if (a.edges().size() != b.edges().size()) return false;
  auto keyed = [](const GraphStore& g) {
    std::map<std::string, Provenance> m;
    for (const auto& e : g.edges()) m.emplace(edge_key(e), e.provenance);
    return m;
  };
  return keyed(a) == keyed(b);
}

}  // namespace biokg
