#include "biokg/linker.hpp"

#include <spdlog/spdlog.h>

namespace biokg {

LinkReport& LinkReport::operator+=(const LinkReport& o) {
  nodes_created += o.nodes_created;
  edges_created += o.edges_created;
  misses += o.misses;
  ambiguities += o.ambiguities;
  mentions += o.mentions;
  facts += o.facts;
  rows_skipped += o.rows_skipped;
  return *this;
}

Json to_json(const LinkReport& r) {
  return Json{{"nodes_created", r.nodes_created}, {"edges_created", r.edges_created},
              {"misses", r.misses},               {"ambiguities", r.ambiguities},
              {"mentions", r.mentions},           {"facts", r.facts},
              {"rows_skipped", r.rows_skipped}};
}

LinkReport materialize_concepts(const std::vector<EntityDocument>& entities, GraphStore& graph) {
  LinkReport rep;
  const std::string concept_collection(collection_name::kConcept);
  if (!graph.has_collection(concept_collection)) graph.register_collection(concept_collection);

  for (const auto& doc : entities) {
    for (const auto& key : doc.concepts) {
      Node c;
      c.id = NodeId::for_concept(key.kind.name(), key.canonical);
      c.collection = concept_collection;
      // Prefixed so concept nodes never shadow entity labels in lookups.
      c.label = key.kind.name() + ":" + key.canonical;
      c.properties["concept_kind"] = key.kind.spec();
      c.properties["canonical"] = key.canonical;
      const NodeId cid = c.id;
      if (!graph.contains(cid)) {
        graph.upsert_node(std::move(c));
        ++rep.nodes_created;
      }
      Edge e{doc.node.id, cid, std::string(edge_kind::kHasConcept), {},
             {doc.origin, doc.node.id.str(), Method::concept_link}};
      if (graph.add_edge(std::move(e)) == AddResult::inserted) ++rep.edges_created;
    }
  }
  return rep;
}

LinkReport resolve_relations(const std::vector<EntityDocument>& entities, GraphStore& graph) {
  LinkReport rep;
  for (const auto& doc : entities) {
    if (!graph.contains(doc.node.id)) {
      spdlog::warn("relation source {} is not in the graph", doc.node.id.str());
      rep.misses += doc.relations.size();
      continue;
    }
    for (const auto& rel : doc.relations) {
      NodeId target;
      if (rel.target) {
        if (!graph.contains(*rel.target)) {
          ++rep.misses;
          spdlog::debug("{}: {} target {} not found", doc.node.id.str(), rel.kind,
                        rel.target->str());
          continue;
        }
        target = *rel.target;
      } else {
        auto hits = graph.find_nodes(rel.target_collection, rel.label);
        if (hits.empty()) {
          ++rep.misses;
          spdlog::debug("{}: {} label '{}' not found in {}", doc.node.id.str(), rel.kind,
                        rel.label, rel.target_collection);
          continue;
        }
        if (hits.size() > 1) {
          ++rep.ambiguities;
          std::string candidates;
          for (const Node* n : hits) candidates += (candidates.empty() ? "" : ", ") + n->id.str();
          spdlog::warn("{}: {} label '{}' is ambiguous in {}: {}", doc.node.id.str(), rel.kind,
                       rel.label, rel.target_collection, candidates);
          continue;
        }
        target = hits.front()->id;
      }
      Edge e{doc.node.id, target, rel.kind, {},
             {doc.origin, doc.node.id.str(), Method::declared}};
      if (graph.add_edge(std::move(e)) == AddResult::inserted) ++rep.edges_created;
    }
  }
  return rep;
}

}  // namespace biokg
