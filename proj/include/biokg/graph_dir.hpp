#pragma once

// A graph directory holds a snapshot (manifest.json, nodes.jsonl,
// edges.jsonl) plus entities.jsonl, the normalized entity documents waiting
// for the linking phase. Mutating commands hold `.lock` for their duration.

#include <filesystem>
#include <vector>

#include "biokg/graph_store.hpp"
#include "biokg/ingest.hpp"

namespace biokg {

class GraphDirLock {
 public:
  // Throws IoError if the directory is already locked.
  explicit GraphDirLock(const std::filesystem::path& dir);
  ~GraphDirLock();
  GraphDirLock(const GraphDirLock&) = delete;
  GraphDirLock& operator=(const GraphDirLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Empty build-mode graph when the directory has no snapshot yet.
GraphStore open_graph(const std::filesystem::path& dir);

void save_graph(const GraphStore& graph, const std::filesystem::path& dir);

std::vector<EntityDocument> load_entities(const std::filesystem::path& dir);

// Appends documents not already stored (exact duplicates are dropped).
void append_entities(const std::filesystem::path& dir, const std::vector<EntityDocument>& docs);

}  // namespace biokg
