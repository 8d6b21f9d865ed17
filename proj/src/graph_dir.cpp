#include "biokg/graph_dir.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <set>

#include "biokg/error.hpp"
#include "biokg/snapshot.hpp"

namespace fs = std::filesystem;

namespace biokg {

GraphDirLock::GraphDirLock(const fs::path& dir) : path_(dir / ".lock") {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw IoError("graph directory " + dir.string() + " is locked by another invocation (" +
                  path_.string() + ")");
  }
  const auto pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

GraphDirLock::~GraphDirLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

GraphStore open_graph(const fs::path& dir) {
  if (!snapshot_exists(dir)) return GraphStore{};
  return load_snapshot(dir);
}

void save_graph(const GraphStore& graph, const fs::path& dir) { save_snapshot(graph, dir); }

std::vector<EntityDocument> load_entities(const fs::path& dir) {
  std::vector<EntityDocument> out;
  const auto path = dir / "entities.jsonl";
  if (!fs::exists(path)) return out;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(entity_document_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError("entities.jsonl: " + std::string(e.what()), lineno);
    }
  }
  return out;
}

void append_entities(const fs::path& dir, const std::vector<EntityDocument>& docs) {
  auto all = load_entities(dir);
  std::set<std::string> seen;
  for (const auto& d : all) seen.insert(entity_document_to_json(d).dump());
  for (const auto& d : docs) {
    if (seen.insert(entity_document_to_json(d).dump()).second) all.push_back(d);
  }
  std::string text;
  for (const auto& d : all) text += entity_document_to_json(d).dump() + "\n";
  write_file_atomic(dir / "entities.jsonl", text);
}

}  // namespace biokg
