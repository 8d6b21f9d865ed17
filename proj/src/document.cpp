#include "biokg/document.hpp"

#include <spdlog/spdlog.h>

#include "biokg/error.hpp"

namespace biokg {

namespace {

bool valid_doc_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

TableGrid parse_grid(const Json& cells, const std::string& path) {
  if (!cells.is_array() || cells.empty()) {
    throw ParseError(path + ": table cells must be a non-empty list of rows");
  }
  TableGrid grid;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const auto& row = cells[r];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array()) throw ParseError(rpath + ": row must be a list");
    std::vector<std::string> out;
    for (const auto& cell : row) {
      if (cell.is_string()) {
        out.push_back(cell.get<std::string>());
      } else if (cell.is_number()) {
        out.push_back(cell.dump());
      } else if (cell.is_null()) {
        out.emplace_back();
      } else {
        throw ParseError(rpath + ": cells must be strings or numbers");
      }
    }
    if (!grid.empty() && out.size() != grid.front().size()) {
      throw ParseError(rpath + ": ragged table, row has " + std::to_string(out.size()) +
                       " cells, expected " + std::to_string(grid.front().size()));
    }
    grid.push_back(std::move(out));
  }
  if (grid.front().empty()) throw ParseError(path + ": table has no columns");
  return grid;
}

}  // namespace

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::title: return "title";
    case SegmentKind::abstract: return "abstract";
    case SegmentKind::section_title: return "section_title";
    case SegmentKind::paragraph: return "paragraph";
    case SegmentKind::table: return "table";
  }
  return "paragraph";
}

std::optional<SegmentKind> parse_segment_kind(std::string_view s) {
  for (auto k : {SegmentKind::title, SegmentKind::abstract, SegmentKind::section_title,
                 SegmentKind::paragraph, SegmentKind::table}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

ParsedDocument parse_document(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("$: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("$: document must be an object");
  if (!j.contains("doc_id") || !j.at("doc_id").is_string()) {
    throw ParseError("$.doc_id: missing document identifier");
  }

  ParsedDocument doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  if (!valid_doc_id(doc.doc_id)) {
    throw ParseError("$.doc_id: '" + doc.doc_id + "' must match [A-Za-z0-9._-]+");
  }

  auto add_text = [&](SegmentKind kind, std::string text) {
    DocumentSegment s;
    s.index = doc.segments.size();
    s.id = NodeId::segment(doc.doc_id, s.index);
    s.kind = kind;
    s.text = std::move(text);
    doc.segments.push_back(std::move(s));
  };

  if (j.contains("title")) {
    if (!j.at("title").is_string()) throw ParseError("$.title: must be a string");
    doc.title = j.at("title").get<std::string>();
    if (!doc.title.empty()) add_text(SegmentKind::title, doc.title);
  }

  if (j.contains("elements")) {
    const auto& elements = j.at("elements");
    if (!elements.is_array()) throw ParseError("$.elements: must be a list");
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const auto& el = elements[i];
      const std::string path = "$.elements[" + std::to_string(i) + "]";
      if (!el.is_object() || !el.contains("type") || !el.at("type").is_string()) {
        throw ParseError(path + ": element needs a string 'type'");
      }
      auto kind = parse_segment_kind(el.at("type").get<std::string>());
      if (!kind) {
        ++doc.skipped_elements;
        continue;
      }
      if (*kind == SegmentKind::table) {
        if (!el.contains("cells")) throw ParseError(path + ".cells: table without cells");
        DocumentSegment s;
        s.index = doc.segments.size();
        s.id = NodeId::segment(doc.doc_id, s.index);
        s.kind = SegmentKind::table;
        s.table = parse_grid(el.at("cells"), path + ".cells");
        doc.segments.push_back(std::move(s));
      } else {
        if (!el.contains("text") || !el.at("text").is_string()) {
          throw ParseError(path + ".text: text element without a string 'text'");
        }
        add_text(*kind, el.at("text").get<std::string>());
      }
    }
  }
  if (doc.segments.empty()) throw ParseError("$: document has no segments");
  if (doc.skipped_elements) {
    spdlog::warn("{}: skipped {} unsupported element(s)", doc.doc_id, doc.skipped_elements);
  }
  return doc;
}

Node segment_node(const ParsedDocument& doc, const DocumentSegment& seg) {
  Node n;
  n.id = seg.id;
  n.collection = std::string(collection_name::kDocument);
  n.label = doc.doc_id + " #" + std::to_string(seg.index) + " (" + std::string(to_string(seg.kind)) +
            ")";
  n.properties["doc_id"] = doc.doc_id;
  if (!doc.title.empty()) n.properties["doc_title"] = doc.title;
  n.properties["segment_kind"] = std::string(to_string(seg.kind));
  n.properties["segment_index"] = seg.index;
  if (seg.table) {
    n.properties["table"] = Json(*seg.table);
  } else {
    n.properties["text"] = seg.text;
  }
  return n;
}

DocumentSegment segment_from_node(const Node& node) {
  DocumentSegment s;
  s.id = node.id;
  try {
    s.index = node.properties.at("segment_index").get<std::size_t>();
    auto kind = parse_segment_kind(node.properties.at("segment_kind").get<std::string>());
    if (!kind) throw ValidationError("bad segment_kind");
    s.kind = *kind;
    if (s.kind == SegmentKind::table) {
      s.table = node.properties.at("table").get<TableGrid>();
    } else {
      s.text = node.properties.at("text").get<std::string>();
    }
  } catch (const std::exception& e) {
    throw ValidationError("node " + node.id.str() + " is not a document segment: " + e.what());
  }
  return s;
}

std::size_t ingest_document(const ParsedDocument& doc, GraphStore& graph) {
  const std::string coll(collection_name::kDocument);
  if (!graph.has_collection(coll)) graph.register_collection(coll);
  std::size_t inserted = 0;
  for (const auto& seg : doc.segments) {
    if (graph.upsert_node(segment_node(doc, seg)) == UpsertResult::inserted) ++inserted;
  }
  return inserted;
}

std::vector<TableCell> flatten_table(const DocumentSegment& segment) {
  if (segment.kind != SegmentKind::table || !segment.table) {
    throw ValidationError("segment " + segment.id.str() + " is not a table");
  }
  const auto& grid = *segment.table;
  std::vector<TableCell> out;
  if (grid.size() < 2) {
    spdlog::warn("{}: table has no data rows", segment.id.str());
    return out;
  }
  const auto& header = grid.front();
  for (std::size_t r = 1; r < grid.size(); ++r) {
    if (grid[r].size() != header.size()) {
      throw ValidationError("segment " + segment.id.str() + ": ragged table row " +
                            std::to_string(r));
    }
    for (std::size_t c = 1; c < header.size(); ++c) out.push_back({r, header[c], grid[r][c]});
  }
  return out;
}

}  // namespace biokg
