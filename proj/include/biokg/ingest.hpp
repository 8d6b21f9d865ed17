#pragma once

// Structured-source ingestion: a declarative SourceDescriptor maps raw record
// keys onto the shared normalized-key registry, names the concept extractors
// and the relation fields. Records arrive as line-delimited JSON objects.
//
// Descriptor format (JSON):
//   {
//     "source_name": "uniprot",
//     "collection": "uniprot",
//     "id_field": "Entry",
//     "label_field": "Protein names",
//     "synonym_fields": ["Gene names"],
//     "field_map": {"Entry": "accession", "EC number": "ec_number", ...},
//     "concept_extractors": [{"key": "ec_number", "kind": "ec_number"}],
//     "relation_fields": [{"field": "Catalytic activity", "kind": "catalytic_activity",
//                          "target_collection": "compound"},
//                         {"field": "UniProt", "kind": "lists_protein",
//                          "target_collection": "uniprot", "target_source": "uniprot"}]
//   }
// A relation field with "target_source" holds target accessions; one without
// holds target labels that are resolved later by label/synonym match.

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "biokg/concepts.hpp"
#include "biokg/graph_store.hpp"

namespace biokg {

struct ConceptExtractor {
  std::string key;  // normalized key
  ConceptKind kind;
};

struct RelationField {
  std::string field;  // raw key
  std::string kind;   // edge kind
  std::string target_collection;
  std::optional<std::string> target_source;
};

struct SourceDescriptor {
  std::string source_name;
  std::string collection;
  std::string id_field;
  std::string label_field;
  std::vector<std::string> synonym_fields;
  std::map<std::string, std::string> field_map;  // raw -> normalized
  std::vector<ConceptExtractor> concept_extractors;
  std::vector<RelationField> relation_fields;
};

// Throws ValidationError listing every offending entry.
SourceDescriptor load_descriptor(const std::string& text);

// Adds the descriptor's normalized keys to the registry and registers its
// collection.
void register_descriptor(const SourceDescriptor& d, GraphStore& graph);

struct RawRecord {
  std::string source_name;
  Json payload;  // object: raw key -> string | number | list thereof
};

struct Relation {
  std::string kind;
  std::string target_collection;
  std::optional<NodeId> target;  // set when an accession was given
  std::string label;             // unresolved label, or the accession
};

struct EntityDocument {
  Node node;
  std::vector<ConceptKey> concepts;
  std::vector<Relation> relations;
  std::string origin;  // source name

  bool operator==(const EntityDocument&) const = default;
};

bool operator==(const Relation& a, const Relation& b);

Json entity_document_to_json(const EntityDocument& d);
EntityDocument entity_document_from_json(const Json& j);

// Record without its id field (or with an id that cannot form a NodeId).
class RecordRejected : public ValidationError {
 public:
  RecordRejected(const std::string& what, std::string locator)
      : ValidationError(what), locator_(std::move(locator)) {}
  const std::string& locator() const { return locator_; }

 private:
  std::string locator_;
};

struct NormalizeResult {
  EntityDocument document;
  std::size_t dropped_keys = 0;
  std::vector<std::string> warnings;
};

// Pure: renames keys, extracts concepts and relations. Throws RecordRejected.
NormalizeResult normalize_record(const RawRecord& record, const SourceDescriptor& d);

struct IngestReport {
  std::size_t inserted = 0;
  std::size_t merged = 0;
  std::size_t rejected = 0;
  std::size_t warnings = 0;
  std::size_t relations_added = 0;
  std::size_t relations_deferred = 0;

  bool operator==(const IngestReport&) const = default;
};

Json to_json(const IngestReport& r);

struct IngestResult {
  IngestReport report;
  std::vector<EntityDocument> documents;  // accepted records, in input order
};

// One upsert per accepted record; declared relations whose target already
// exists become edges, the rest wait for resolve_relations. Per-record
// failures are tallied; only stream I/O errors throw.
IngestResult ingest_source(const std::vector<RawRecord>& records, const SourceDescriptor& d,
                           GraphStore& graph);

// Reads line-delimited JSON records. Malformed lines are reported through
// `bad_lines` (1-based) and skipped.
std::vector<RawRecord> read_records(std::istream& in, const std::string& source_name,
                                    std::vector<std::size_t>* bad_lines = nullptr);

IngestResult ingest_stream(std::istream& in, const SourceDescriptor& d, GraphStore& graph);

}  // namespace biokg
