#pragma once

// Parsed-document input. The shape emulates the JSON emitted by an upstream
// PDF conversion service:
//
//   {
//     "doc_id": "handbook-ce",            required, [A-Za-z0-9._-]+
//     "title": "Handbook ...",            optional, becomes segment 0
//     "elements": [                       optional
//       {"type": "abstract",      "text": "..."},
//       {"type": "section_title", "text": "..."},
//       {"type": "paragraph",     "text": "..."},
//       {"type": "title",         "text": "..."},
//       {"type": "table",         "cells": [["h1", "h2"], ["a", "b"]]},
//       {"type": "figure", ...}           other types are skipped and counted
//     ]
//   }

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biokg/graph_store.hpp"

namespace biokg {

enum class SegmentKind { title, abstract, section_title, paragraph, table };

std::string_view to_string(SegmentKind k);
std::optional<SegmentKind> parse_segment_kind(std::string_view s);

using TableGrid = std::vector<std::vector<std::string>>;  // row-major, row 0 = header

struct DocumentSegment {
  NodeId id;  // doc:<doc_id>:<index>
  std::size_t index = 0;
  SegmentKind kind = SegmentKind::paragraph;
  std::string text;                // empty for tables
  std::optional<TableGrid> table;  // only for tables

  bool operator==(const DocumentSegment&) const = default;
};

struct ParsedDocument {
  std::string doc_id;
  std::string title;
  std::vector<DocumentSegment> segments;
  std::size_t skipped_elements = 0;

  bool operator==(const ParsedDocument&) const = default;
};

// Throws ParseError naming the element path (e.g. "$.elements[3].cells").
ParsedDocument parse_document(std::string_view json_text);

// Upserts one `document`-collection node per segment; returns how many were
// newly inserted.
std::size_t ingest_document(const ParsedDocument& doc, GraphStore& graph);

Node segment_node(const ParsedDocument& doc, const DocumentSegment& seg);

// Rebuilds a segment from its stored node.
DocumentSegment segment_from_node(const Node& node);

struct TableCell {
  std::size_t row = 0;
  std::string header;
  std::string value;

  bool operator==(const TableCell&) const = default;
};

// One entry per non-header cell in columns >= 1, paired with its column
// header. A single-row table yields nothing (with a warning).
std::vector<TableCell> flatten_table(const DocumentSegment& segment);

}  // namespace biokg
