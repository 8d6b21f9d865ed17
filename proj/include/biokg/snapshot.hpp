#pragma once

// Snapshot layout, one directory:
//   manifest.json  {"format_version": 1, "collections": [...], "keys": [...]}
//   nodes.jsonl    {"id","collection","label","synonyms","properties"} per line
//   edges.jsonl    {"src","dst","kind","properties","provenance"} per line
// Lines are sorted by node id (edges by src, dst, kind, properties).

#include <filesystem>
#include <string>

#include "biokg/graph_store.hpp"

namespace biokg {

inline constexpr int kSnapshotFormatVersion = 1;

Json node_to_json(const Node& n);
Node node_from_json(const Json& j);  // throws ParseError on unknown/missing keys
Json edge_to_json(const Edge& e);
Edge edge_from_json(const Json& j);

// Files are written to temporaries and renamed into place.
void save_snapshot(const GraphStore& graph, const std::filesystem::path& dir);

// All-or-nothing: any malformed line throws ParseError carrying the line
// number and nothing is returned.
GraphStore load_snapshot(const std::filesystem::path& dir);

bool snapshot_exists(const std::filesystem::path& dir);

// Writes `text` to `path` via a temporary file in the same directory.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace biokg
