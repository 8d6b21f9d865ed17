#include "biokg/ner.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "biokg/text.hpp"

namespace biokg {

namespace {

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

// Folded, whitespace-collapsed copy of `text` plus the original offset of
// every normalized byte. Whitespace runs map to their first byte.
struct NormalizedText {
  std::string chars;
  std::vector<std::size_t> origin;
};

NormalizedText normalize_with_offsets(std::string_view text) {
  NormalizedText n;
  n.chars.reserve(text.size());
  n.origin.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text::is_space(text[i])) {
      if (!n.chars.empty() && n.chars.back() == ' ') continue;
      n.chars.push_back(' ');
    } else {
      n.chars.push_back(text::fold_char(text[i]));
    }
    n.origin.push_back(i);
  }
  return n;
}

bool start_boundary(std::string_view s, std::size_t i) {
  return i == 0 || !text::is_word_char(s[i - 1]) || !text::is_word_char(s[i]);
}

bool end_boundary(std::string_view s, std::size_t e) {
  return e == s.size() || !text::is_word_char(s[e]) || !text::is_word_char(s[e - 1]);
}

std::string doc_id_of(const GraphStore& graph, const NodeId& segment) {
  if (const Node* n = graph.find(segment)) {
    auto it = n->properties.find("doc_id");
    if (it != n->properties.end() && it->second.is_string()) return it->second.get<std::string>();
  }
  const auto& s = segment.str();
  const auto first = s.find(':');
  const auto last = s.rfind(':');
  return s.substr(first + 1, last - first - 1);
}

}  // namespace

Gazetteer::Gazetteer(std::size_t min_length) : min_length_(min_length), trie_(1) {}

bool Gazetteer::add(std::string_view surface, const NodeId& id) {
  auto key = text::normalize_surface(surface);
  if (utf8_length(key) < min_length_) return false;
  auto& ids = entries_[key];
  auto pos = std::lower_bound(ids.begin(), ids.end(), id);
  if (pos == ids.end() || *pos != id) ids.insert(pos, id);

  std::size_t node = 0;
  for (char c : key) {
    auto it = trie_[node].next.find(c);
    if (it == trie_[node].next.end()) {
      trie_.emplace_back();
      it = trie_[node].next.emplace(c, trie_.size() - 1).first;
    }
    node = it->second;
  }
  trie_[node].terminal = true;
  return true;
}

std::vector<Gazetteer::Match> Gazetteer::scan(std::string_view text) const {
  std::vector<Match> out;
  const auto norm = normalize_with_offsets(text);
  const std::string_view s = norm.chars;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t best_end = 0;
    if (start_boundary(s, i)) {
      std::size_t node = 0;
      for (std::size_t j = i; j < s.size(); ++j) {
        auto it = trie_[node].next.find(s[j]);
        if (it == trie_[node].next.end()) break;
        node = it->second;
        if (trie_[node].terminal && end_boundary(s, j + 1)) best_end = j + 1;
      }
    }
    if (best_end == 0) {
      ++i;
      continue;
    }
    const auto& ids = entries_.at(std::string(s.substr(i, best_end - i)));
    out.push_back({norm.origin[i], norm.origin[best_end - 1] + 1, &ids});
    i = best_end;
  }
  return out;
}

Gazetteer build_gazetteer(const GraphStore& graph, std::size_t min_length) {
  Gazetteer g(min_length);
  for (const auto& [id, node] : graph.nodes()) {
    if (node.collection == collection_name::kDocument ||
        node.collection == collection_name::kConcept) {
      continue;
    }
    g.add(node.label, id);
    for (const auto& s : node.synonyms) g.add(s, id);
  }
  return g;
}

Json to_json(const Mention& m) {
  Json j{{"node_id", m.node_id.str()},
         {"segment_id", m.segment_id.str()},
         {"start", m.start},
         {"end", m.end},
         {"surface", m.surface}};
  if (m.cell) j["cell"] = {m.cell->row, m.cell->col};
  return j;
}

std::vector<Mention> recognize(const DocumentSegment& segment, const Gazetteer& gazetteer) {
  std::vector<Mention> out;
  auto emit = [&](std::string_view text, std::optional<CellRef> cell) {
    for (const auto& m : gazetteer.scan(text)) {
      for (const auto& id : *m.ids) {
        out.push_back({id, segment.id, m.start, m.end,
                       std::string(text.substr(m.start, m.end - m.start)), cell});
      }
    }
  };
  if (segment.table) {
    const auto& grid = *segment.table;
    for (std::size_t r = 0; r < grid.size(); ++r) {
      for (std::size_t c = 0; c < grid[r].size(); ++c) emit(grid[r][c], CellRef{r, c});
    }
  } else {
    emit(segment.text, std::nullopt);
  }
  return out;
}

LinkReport link_mentions(const std::vector<Mention>& mentions, GraphStore& graph) {
  LinkReport rep;
  // segment -> entities mentioned there
  std::map<NodeId, std::set<NodeId>> by_segment;
  for (const auto& m : mentions) {
    Properties props{{"surface", m.surface}, {"start", m.start}, {"end", m.end}};
    if (m.cell) {
      props["row"] = m.cell->row;
      props["col"] = m.cell->col;
    }
    Edge e{m.node_id, m.segment_id, std::string(edge_kind::kMentionedIn), std::move(props),
           {doc_id_of(graph, m.segment_id), m.segment_id.str(), Method::ner}};
    if (graph.add_edge(std::move(e)) == AddResult::inserted) ++rep.edges_created;
    ++rep.mentions;
    by_segment[m.segment_id].insert(m.node_id);
  }

  // (a, b) with a < b -> shared segments
  std::map<std::pair<NodeId, NodeId>, std::set<std::string>> pairs;
  for (const auto& [seg, ids] : by_segment) {
    for (auto a = ids.begin(); a != ids.end(); ++a) {
      for (auto b = std::next(a); b != ids.end(); ++b) pairs[{*a, *b}].insert(seg.str());
    }
  }

  const std::string kind(edge_kind::kCooccursWith);
  for (const auto& [pair, segs] : pairs) {
    for (const auto& [src, dst] : {pair, std::make_pair(pair.second, pair.first)}) {
      auto existing = graph.edges_between(src, dst, kind);
      if (existing.empty()) {
        Properties props{{"count", segs.size()},
                         {"segments", std::vector<std::string>(segs.begin(), segs.end())}};
        const NodeId first_seg(*segs.begin());
        Edge e{src, dst, kind, std::move(props),
               {doc_id_of(graph, first_seg), first_seg.str(), Method::cooccurrence}};
        if (graph.add_edge(std::move(e)) == AddResult::inserted) ++rep.edges_created;
        continue;
      }
      const Edge& cur = *existing.front();
      std::set<std::string> merged = segs;
      if (auto it = cur.properties.find("segments"); it != cur.properties.end()) {
        for (const auto& s : it->second) merged.insert(s.get<std::string>());
      }
      Properties props{{"count", merged.size()},
                       {"segments", std::vector<std::string>(merged.begin(), merged.end())}};
      graph.update_edge_properties(cur, std::move(props));
    }
  }
  return rep;
}

Json to_json(const Fact& f) {
  return Json{{"subject", f.subject.str()},
              {"predicate", f.predicate},
              {"value", f.value},
              {"origin", f.provenance.origin},
              {"locator", f.provenance.locator}};
}

std::string fact_predicate(std::string_view header, const KeyRegistry& keys) {
  const auto key = text::to_snake_key(header);
  if (!key.empty() && keys.contains(key)) return key;
  return "raw:" + text::trim(header);
}

FactResult extract_facts(const DocumentSegment& table, const std::vector<Mention>& mentions,
                         GraphStore& graph) {
  FactResult out;
  const auto cells = flatten_table(table);
  if (cells.empty()) return out;

  std::map<std::size_t, std::set<NodeId>> row_entities;
  for (const auto& m : mentions) {
    if (m.segment_id == table.id && m.cell && m.cell->col == 0 && m.cell->row > 0) {
      row_entities[m.cell->row].insert(m.node_id);
    }
  }

  const auto origin = doc_id_of(graph, table.id);
  const std::size_t rows = table.table->size();
  for (std::size_t r = 1; r < rows; ++r) {
    auto it = row_entities.find(r);
    if (it == row_entities.end() || it->second.size() != 1) {
      ++out.rows_skipped;
      spdlog::debug("{}: row {} skipped ({} candidate entities)", table.id.str(), r,
                    it == row_entities.end() ? 0 : it->second.size());
      continue;
    }
    const NodeId subject = *it->second.begin();
    std::vector<std::string> doc_facts;
    for (const auto& cell : cells) {
      if (cell.row != r) continue;
      Fact f{subject, fact_predicate(cell.header, graph.keys()), cell.value,
             {origin, table.id.str(), Method::fact}};
      Edge e{subject, table.id, std::string(edge_kind::kFact),
             {{"predicate", f.predicate}, {"value", f.value}, {"row", r}},
             f.provenance};
      graph.add_edge(std::move(e));
      doc_facts.push_back(f.predicate + "=" + f.value);
      out.facts.push_back(std::move(f));
    }
    const Node& current = graph.node(subject);
    Node update{subject, current.collection, current.label, {}, {{"doc_facts", Json(doc_facts)}}};
    graph.upsert_node(std::move(update));
  }
  return out;
}

NerOutput run_document_linking(GraphStore& graph, const Gazetteer& gazetteer) {
  NerOutput out;
  std::vector<DocumentSegment> segments;
  for (const auto& [id, node] : graph.nodes()) {
    if (node.collection == collection_name::kDocument) segments.push_back(segment_from_node(node));
  }
  for (const auto& seg : segments) {
    auto found = recognize(seg, gazetteer);
    out.mentions.insert(out.mentions.end(), found.begin(), found.end());
  }
  out.report += link_mentions(out.mentions, graph);

  for (const auto& seg : segments) {
    if (seg.kind != SegmentKind::table) continue;
    const auto before = graph.stats().edge_count;
    auto fr = extract_facts(seg, out.mentions, graph);
    out.report.edges_created += graph.stats().edge_count - before;
    out.report.facts += fr.facts.size();
    out.report.rows_skipped += fr.rows_skipped;
    out.facts.insert(out.facts.end(), fr.facts.begin(), fr.facts.end());
  }
  return out;
}

}  // namespace biokg
