#include "biokg/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "biokg/error.hpp"

namespace fs = std::filesystem;

namespace biokg {

namespace {

void require_exact_keys(const Json& j, const std::set<std::string>& expected,
                        const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " record is not an object");
  for (const auto& [k, v] : j.items()) {
    if (!expected.count(k)) {
      throw ParseError(std::string("unknown ") + what + " key '" + k + "'");
    }
  }
  for (const auto& k : expected) {
    if (!j.contains(k)) throw ParseError(std::string(what) + " record missing key '" + k + "'");
  }
}

const std::string& get_string(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ParseError(std::string("key '") + key + "' must be a string");
  return v.get_ref<const std::string&>();
}

Properties properties_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("'properties' must be an object");
  Properties p;
  for (const auto& [k, v] : j.items()) p.emplace(k, v);
  return p;
}

Json properties_to_json(const Properties& p) {
  Json j(Json::value_t::object);
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(path.filename().string() + ": malformed record: " + e.what(), lineno);
    }
    try {
      fn(j);
    } catch (const ParseError& e) {
      throw ParseError(path.filename().string() + ": " + e.what(), lineno);
    } catch (const Error& e) {
      throw ParseError(path.filename().string() + ": " + e.what(), lineno);
    } catch (const Json::exception& e) {
      throw ParseError(path.filename().string() + ": " + e.what(), lineno);
    }
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
}

}  // namespace

Json node_to_json(const Node& n) {
  return Json{{"id", n.id.str()},
              {"collection", n.collection},
              {"label", n.label},
              {"synonyms", n.synonyms},
              {"properties", properties_to_json(n.properties)}};
}

Node node_from_json(const Json& j) {
  require_exact_keys(j, {"id", "collection", "label", "synonyms", "properties"}, "node");
  Node n;
  n.id = NodeId(get_string(j, "id"));
  n.collection = get_string(j, "collection");
  n.label = get_string(j, "label");
  const auto& syn = j.at("synonyms");
  if (!syn.is_array()) throw ParseError("'synonyms' must be an array");
  for (const auto& s : syn) {
    if (!s.is_string()) throw ParseError("synonyms must be strings");
    n.synonyms.push_back(s.get<std::string>());
  }
  n.properties = properties_from_json(j.at("properties"));
  return n;
}

Json edge_to_json(const Edge& e) {
  return Json{{"src", e.src.str()},
              {"dst", e.dst.str()},
              {"kind", e.kind},
              {"properties", properties_to_json(e.properties)},
              {"provenance",
               {{"origin", e.provenance.origin},
                {"locator", e.provenance.locator},
                {"method", std::string(to_string(e.provenance.method))}}}};
}

Edge edge_from_json(const Json& j) {
  require_exact_keys(j, {"src", "dst", "kind", "properties", "provenance"}, "edge");
  Edge e;
  e.src = NodeId(get_string(j, "src"));
  e.dst = NodeId(get_string(j, "dst"));
  e.kind = get_string(j, "kind");
  e.properties = properties_from_json(j.at("properties"));
  const auto& p = j.at("provenance");
  require_exact_keys(p, {"origin", "locator", "method"}, "provenance");
  e.provenance.origin = get_string(p, "origin");
  e.provenance.locator = get_string(p, "locator");
  e.provenance.method = parse_method(get_string(p, "method"));
  return e;
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void save_snapshot(const GraphStore& graph, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::string nodes;
  for (const auto& [id, n] : graph.nodes()) {
    nodes += node_to_json(n).dump();
    nodes.push_back('\n');
  }

  std::vector<const Edge*> sorted;
  sorted.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const Edge* a, const Edge* b) { return edge_key(*a) < edge_key(*b); });
  std::string edges;
  for (const Edge* e : sorted) {
    edges += edge_to_json(*e).dump();
    edges.push_back('\n');
  }

  Json manifest{{"format_version", kSnapshotFormatVersion},
                {"collections", graph.collections()},
                {"keys", graph.keys().keys()}};

  write_file_atomic(dir / "nodes.jsonl", nodes);
  write_file_atomic(dir / "edges.jsonl", edges);
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

bool snapshot_exists(const fs::path& dir) { return fs::exists(dir / "manifest.json"); }

GraphStore load_snapshot(const fs::path& dir) {
  Json manifest;
  try {
    manifest = Json::parse(read_file(dir / "manifest.json"));
  } catch (const Json::parse_error& e) {
    throw ParseError("manifest.json: " + std::string(e.what()));
  }
  if (!manifest.is_object() || manifest.value("format_version", 0) != kSnapshotFormatVersion) {
    throw ParseError("manifest.json: unsupported format_version");
  }

  GraphStore g;
  try {
    for (const auto& c : manifest.at("collections")) g.register_collection(c.get<std::string>());
    for (const auto& k : manifest.at("keys")) g.keys().add(k.get<std::string>());
  } catch (const Json::exception& e) {
    throw ParseError("manifest.json: " + std::string(e.what()));
  }

  for_each_line(dir / "nodes.jsonl", [&](const Json& j) {
    Node n = node_from_json(j);
    if (g.contains(n.id)) throw ParseError("duplicate node id " + n.id.str());
    g.upsert_node(std::move(n));
  });
  for_each_line(dir / "edges.jsonl", [&](const Json& j) {
    if (g.add_edge(edge_from_json(j)) == AddResult::duplicate) {
      throw ParseError("duplicate edge record");
    }
  });
  return g;
}

}  // namespace biokg
