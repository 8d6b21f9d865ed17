#include "biokg/ingest.hpp"

#include <set>

#include <spdlog/spdlog.h>

#include "biokg/text.hpp"

namespace biokg {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

// Scalar (string/number) -> string; anything else -> nullopt.
std::optional<std::string> scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  return std::nullopt;
}

std::vector<std::string> text_values(const Json& v) {
  std::vector<std::string> out;
  auto push = [&](const Json& x) {
    if (auto s = scalar_text(x); s && !text::trim(*s).empty()) out.push_back(text::trim(*s));
  };
  if (v.is_array()) {
    for (const auto& x : v) push(x);
  } else {
    push(v);
  }
  return out;
}

bool valid_property_value(const Json& v) {
  if (v.is_string() || v.is_number()) return true;
  if (!v.is_array()) return false;
  for (const auto& x : v) {
    if (!(x.is_string() || x.is_number())) return false;
  }
  return true;
}

// The field map plus identity entries for id/label fields that are already
// normalized names.
std::map<std::string, std::string> effective_field_map(const SourceDescriptor& d) {
  auto m = d.field_map;
  for (const auto& f : {d.id_field, d.label_field}) {
    if (!m.count(f) && text::is_snake_key(f)) m.emplace(f, f);
  }
  return m;
}

std::vector<std::string> string_list(const Json& j, const char* key,
                                     std::vector<std::string>& errors) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (!v.is_array()) {
    errors.push_back(std::string("'") + key + "' must be a list of strings");
    return out;
  }
  for (const auto& x : v) {
    if (x.is_string()) {
      out.push_back(x.get<std::string>());
    } else {
      errors.push_back(std::string("'") + key + "' must be a list of strings");
    }
  }
  return out;
}

}  // namespace

SourceDescriptor load_descriptor(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("descriptor is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("descriptor must be a JSON object");

  static const std::set<std::string> kKnown = {
      "source_name",   "collection",         "id_field",       "label_field",
      "synonym_fields", "field_map",         "concept_extractors", "relation_fields"};
  std::vector<std::string> errors;
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.count(k)) errors.push_back("unknown descriptor key '" + k + "'");
  }

  SourceDescriptor d;
  auto req = [&](const char* key, std::string& out) {
    if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty()) {
      errors.push_back(std::string("missing or empty '") + key + "'");
      return;
    }
    out = j.at(key).get<std::string>();
  };
  req("source_name", d.source_name);
  req("collection", d.collection);
  req("id_field", d.id_field);
  req("label_field", d.label_field);
  for (const auto* name : {&d.source_name, &d.collection}) {
    if (name->find(':') != std::string::npos ||
        std::any_of(name->begin(), name->end(), text::is_space)) {
      errors.push_back("'" + *name + "' may not contain ':' or whitespace");
    }
  }
  d.synonym_fields = string_list(j, "synonym_fields", errors);

  if (j.contains("field_map")) {
    const auto& fm = j.at("field_map");
    if (!fm.is_object()) {
      errors.push_back("'field_map' must be an object");
    } else {
      std::map<std::string, std::vector<std::string>> by_target;
      for (const auto& [raw, norm] : fm.items()) {
        if (!norm.is_string()) {
          errors.push_back("field_map['" + raw + "'] must be a string");
          continue;
        }
        const auto key = norm.get<std::string>();
        if (!text::is_snake_key(key)) {
          errors.push_back("normalized key '" + key + "' is not snake_case");
        }
        by_target[key].push_back(raw);
        d.field_map.emplace(raw, key);
      }
      for (const auto& [key, raws] : by_target) {
        if (raws.size() > 1) {
          std::string list;
          for (const auto& r : raws) list += (list.empty() ? "'" : ", '") + r + "'";
          errors.push_back("normalized key '" + key + "' mapped from multiple raw keys: " + list);
        }
      }
    }
  }

  for (const auto* f : {&d.id_field, &d.label_field}) {
    if (!f->empty() && !d.field_map.count(*f) && !text::is_snake_key(*f)) {
      errors.push_back("'" + *f + "' is neither mapped in field_map nor a normalized key");
    }
  }

  std::set<std::string> normalized;
  for (const auto& [raw, key] : effective_field_map(d)) normalized.insert(key);

  if (j.contains("concept_extractors")) {
    const auto& ce = j.at("concept_extractors");
    if (!ce.is_array()) errors.push_back("'concept_extractors' must be a list");
    for (const auto& e : ce.is_array() ? ce : Json::array()) {
      if (!e.is_object() || !e.contains("key") || !e.contains("kind") ||
          !e.at("key").is_string() || !e.at("kind").is_string()) {
        errors.push_back("concept extractor needs string 'key' and 'kind'");
        continue;
      }
      ConceptExtractor x;
      x.key = e.at("key").get<std::string>();
      if (!normalized.count(x.key)) {
        errors.push_back("concept extractor key '" + x.key + "' is not a mapped normalized key");
      }
      try {
        x.kind = ConceptKind::parse(e.at("kind").get<std::string>());
      } catch (const ValidationError& err) {
        errors.push_back(err.what());
        continue;
      }
      d.concept_extractors.push_back(std::move(x));
    }
  }

  if (j.contains("relation_fields")) {
    const auto& rf = j.at("relation_fields");
    if (!rf.is_array()) errors.push_back("'relation_fields' must be a list");
    for (const auto& e : rf.is_array() ? rf : Json::array()) {
      auto str = [&](const char* k) -> std::string {
        return e.is_object() && e.contains(k) && e.at(k).is_string() ? e.at(k).get<std::string>()
                                                                     : std::string();
      };
      RelationField r{str("field"), str("kind"), str("target_collection"), std::nullopt};
      if (r.field.empty() || r.kind.empty() || r.target_collection.empty()) {
        errors.push_back("relation field needs 'field', 'kind' and 'target_collection'");
        continue;
      }
      if (!str("target_source").empty()) r.target_source = str("target_source");
      d.relation_fields.push_back(std::move(r));
    }
  }

  if (!errors.empty()) throw ValidationError("invalid descriptor: " + join(errors));
  return d;
}

void register_descriptor(const SourceDescriptor& d, GraphStore& graph) {
  graph.register_collection(d.collection);
  for (const auto& [raw, key] : effective_field_map(d)) graph.keys().add(key);
}

bool operator==(const Relation& a, const Relation& b) {
  return a.kind == b.kind && a.target_collection == b.target_collection && a.target == b.target &&
         a.label == b.label;
}

Json entity_document_to_json(const EntityDocument& d) {
  Json concepts = Json::array();
  for (const auto& c : d.concepts) concepts.push_back({{"kind", c.kind.spec()}, {"canonical", c.canonical}});
  Json relations = Json::array();
  for (const auto& r : d.relations) {
    Json jr{{"kind", r.kind}, {"target_collection", r.target_collection}, {"label", r.label}};
    if (r.target) jr["target"] = r.target->str();
    relations.push_back(std::move(jr));
  }
  Json node{{"id", d.node.id.str()},
            {"collection", d.node.collection},
            {"label", d.node.label},
            {"synonyms", d.node.synonyms},
            {"properties", Json(d.node.properties)}};
  return Json{{"origin", d.origin}, {"node", node}, {"concepts", concepts}, {"relations", relations}};
}

EntityDocument entity_document_from_json(const Json& j) {
  EntityDocument d;
  d.origin = j.at("origin").get<std::string>();
  const auto& n = j.at("node");
  d.node.id = NodeId(n.at("id").get<std::string>());
  d.node.collection = n.at("collection").get<std::string>();
  d.node.label = n.at("label").get<std::string>();
  d.node.synonyms = n.at("synonyms").get<std::vector<std::string>>();
  for (const auto& [k, v] : n.at("properties").items()) d.node.properties.emplace(k, v);
  for (const auto& c : j.at("concepts")) {
    d.concepts.push_back({ConceptKind::parse(c.at("kind").get<std::string>()),
                          c.at("canonical").get<std::string>()});
  }
  for (const auto& r : j.at("relations")) {
    Relation rel;
    rel.kind = r.at("kind").get<std::string>();
    rel.target_collection = r.at("target_collection").get<std::string>();
    rel.label = r.at("label").get<std::string>();
    if (r.contains("target")) rel.target = NodeId(r.at("target").get<std::string>());
    d.relations.push_back(std::move(rel));
  }
  return d;
}

NormalizeResult normalize_record(const RawRecord& record, const SourceDescriptor& d) {
  const auto& p = record.payload;
  const std::string locator = d.source_name + ":" + (p.is_object() ? p.dump() : "<non-object>");
  if (record.source_name != d.source_name) {
    throw RecordRejected("record from source '" + record.source_name +
                             "' does not match descriptor '" + d.source_name + "'",
                         locator);
  }
  if (!p.is_object()) throw RecordRejected("record payload is not an object", locator);

  std::optional<std::string> accession;
  if (p.contains(d.id_field)) accession = scalar_text(p.at(d.id_field));
  if (!accession || text::trim(*accession).empty()) {
    throw RecordRejected("record missing id field '" + d.id_field + "'", locator);
  }
  *accession = text::trim(*accession);
  if (!NodeId::is_valid(d.source_name + ":" + d.collection + ":" + *accession)) {
    throw RecordRejected("accession '" + *accession + "' cannot form a node id", locator);
  }

  NormalizeResult out;
  auto& doc = out.document;
  doc.origin = d.source_name;
  doc.node.id = NodeId::entity(d.source_name, d.collection, *accession);
  doc.node.collection = d.collection;

  if (p.contains(d.label_field)) {
    auto labels = text_values(p.at(d.label_field));
    if (!labels.empty()) doc.node.label = labels.front();
  }
  if (doc.node.label.empty()) {
    doc.node.label = *accession;
    out.warnings.push_back(doc.node.id.str() + ": no label, using accession");
  }
  for (const auto& f : d.synonym_fields) {
    if (!p.contains(f)) continue;
    for (auto& s : text_values(p.at(f))) doc.node.synonyms.push_back(std::move(s));
  }

  std::set<std::string> consumed(d.synonym_fields.begin(), d.synonym_fields.end());
  for (const auto& r : d.relation_fields) consumed.insert(r.field);
  const auto fmap = effective_field_map(d);
  for (const auto& [raw, value] : p.items()) {
    auto it = fmap.find(raw);
    if (it == fmap.end()) {
      if (!consumed.count(raw)) {
        ++out.dropped_keys;
        out.warnings.push_back(doc.node.id.str() + ": unmapped key '" + raw + "' dropped");
      }
      continue;
    }
    if (value.is_null()) continue;
    if (!valid_property_value(value)) {
      out.warnings.push_back(doc.node.id.str() + ": key '" + raw +
                             "' holds a nested value, dropped");
      continue;
    }
    doc.node.properties[it->second] = value;
  }

  for (const auto& x : d.concept_extractors) {
    auto pit = doc.node.properties.find(x.key);
    if (pit == doc.node.properties.end()) continue;
    for (const auto& raw : text_values(pit->second)) {
      try {
        ConceptKey key{x.kind, canonicalize(x.kind, raw)};
        if (std::find(doc.concepts.begin(), doc.concepts.end(), key) == doc.concepts.end()) {
          doc.concepts.push_back(std::move(key));
        }
      } catch (const InvalidConceptError& e) {
        out.warnings.push_back(doc.node.id.str() + ": " + e.what() + ", concept skipped");
      }
    }
  }

  for (const auto& r : d.relation_fields) {
    if (!p.contains(r.field)) continue;
    for (const auto& value : text_values(p.at(r.field))) {
      Relation rel{r.kind, r.target_collection, std::nullopt, value};
      if (r.target_source) {
        const auto id = *r.target_source + ":" + r.target_collection + ":" + value;
        if (!NodeId::is_valid(id)) {
          out.warnings.push_back(doc.node.id.str() + ": bad relation accession '" + value + "'");
          continue;
        }
        rel.target = NodeId(id);
      }
      doc.relations.push_back(std::move(rel));
    }
  }
  return out;
}

Json to_json(const IngestReport& r) {
  return Json{{"inserted", r.inserted},
              {"merged", r.merged},
              {"rejected", r.rejected},
              {"warnings", r.warnings},
              {"relations_added", r.relations_added},
              {"relations_deferred", r.relations_deferred}};
}

IngestResult ingest_source(const std::vector<RawRecord>& records, const SourceDescriptor& d,
                           GraphStore& graph) {
  register_descriptor(d, graph);
  IngestResult result;
  auto& rep = result.report;
  for (const auto& record : records) {
    NormalizeResult nr;
    try {
      nr = normalize_record(record, d);
    } catch (const RecordRejected& e) {
      ++rep.rejected;
      spdlog::warn("{}: record rejected: {}", d.source_name, e.what());
      continue;
    }
    rep.warnings += nr.warnings.size();
    for (const auto& w : nr.warnings) spdlog::debug("{}", w);

    auto& doc = nr.document;
    if (graph.upsert_node(doc.node) == UpsertResult::inserted) {
      ++rep.inserted;
    } else {
      ++rep.merged;
    }
    for (const auto& rel : doc.relations) {
      if (rel.target && graph.contains(*rel.target)) {
        Edge e{doc.node.id, *rel.target, rel.kind, {},
               {d.source_name, doc.node.id.str(), Method::declared}};
        if (graph.add_edge(std::move(e)) == AddResult::inserted) ++rep.relations_added;
      } else {
        ++rep.relations_deferred;
      }
    }
    result.documents.push_back(std::move(doc));
  }
  if (rep.warnings) spdlog::info("{}: {} normalization warnings", d.source_name, rep.warnings);
  return result;
}

std::vector<RawRecord> read_records(std::istream& in, const std::string& source_name,
                                    std::vector<std::size_t>* bad_lines) {
  std::vector<RawRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = Json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("not an object");
      out.push_back({source_name, std::move(j)});
    } catch (const std::exception&) {
      if (bad_lines) bad_lines->push_back(lineno);
      spdlog::warn("{}: line {} is not a JSON object, skipped", source_name, lineno);
    }
  }
  if (in.bad()) throw IoError("read failed while streaming records for " + source_name);
  return out;
}

IngestResult ingest_stream(std::istream& in, const SourceDescriptor& d, GraphStore& graph) {
  std::vector<std::size_t> bad;
  auto records = read_records(in, d.source_name, &bad);
  auto result = ingest_source(records, d, graph);
  result.report.rejected += bad.size();
  return result;
}

}  // namespace biokg
