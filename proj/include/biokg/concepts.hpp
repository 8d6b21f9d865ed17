#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "biokg/error.hpp"

namespace biokg {

class InvalidConceptError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Kind of a shared concept. `other` carries a descriptor-chosen name.
class ConceptKind {
 public:
  enum class Tag { ec_number, compound_name, taxon, other };

  ConceptKind() = default;
  static ConceptKind ec_number() { return ConceptKind(Tag::ec_number, {}); }
  static ConceptKind compound_name() { return ConceptKind(Tag::compound_name, {}); }
  static ConceptKind taxon() { return ConceptKind(Tag::taxon, {}); }
  static ConceptKind other(std::string name);

  // Accepts "ec_number", "compound_name", "taxon" or "other:<snake_name>".
  static ConceptKind parse(std::string_view spec);

  Tag tag() const { return tag_; }
  // Name used inside concept node ids: the tag name, or the other-name.
  std::string name() const;
  // Round-trips through parse().
  std::string spec() const;

  bool operator==(const ConceptKind&) const = default;

 private:
  ConceptKind(Tag tag, std::string other) : tag_(tag), other_(std::move(other)) {}
  Tag tag_ = Tag::ec_number;
  std::string other_;
};

struct ConceptKey {
  ConceptKind kind;
  std::string canonical;

  bool operator==(const ConceptKey&) const = default;
};

// Reduces an EC number to "a.b.c.d" where each field is a positive integer
// (leading zeros stripped) or '-'. Accepted decorations: surrounding
// whitespace, trailing ';', and an "EC"/"ec" prefix followed by optional
// spaces and/or a ':'. Throws InvalidConceptError otherwise.
std::string normalize_ec(std::string_view raw);
std::optional<std::string> try_normalize_ec(std::string_view raw);

// Dispatches to the kind's canonicalizer:
//   ec_number      normalize_ec
//   compound_name  case-fold + whitespace collapse
//   taxon          digit string, whitespace trimmed
//   other          whitespace collapse
std::string canonicalize(const ConceptKind& kind, std::string_view raw);

}  // namespace biokg
