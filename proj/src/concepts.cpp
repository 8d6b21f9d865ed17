#include "biokg/concepts.hpp"

#include <vector>

#include "biokg/text.hpp"

namespace biokg {

ConceptKind ConceptKind::other(std::string name) {
  if (!text::is_snake_key(name) || name == "ec_number" || name == "compound_name" ||
      name == "taxon") {
    throw ValidationError("invalid other-concept name '" + name + "'");
  }
  return ConceptKind(Tag::other, std::move(name));
}

ConceptKind ConceptKind::parse(std::string_view spec) {
  if (spec == "ec_number") return ec_number();
  if (spec == "compound_name") return compound_name();
  if (spec == "taxon") return taxon();
  constexpr std::string_view kOther = "other:";
  if (spec.substr(0, kOther.size()) == kOther) {
    return other(std::string(spec.substr(kOther.size())));
  }
  throw ValidationError("unknown concept kind '" + std::string(spec) + "'");
}

std::string ConceptKind::name() const {
  switch (tag_) {
    case Tag::ec_number: return "ec_number";
    case Tag::compound_name: return "compound_name";
    case Tag::taxon: return "taxon";
    case Tag::other: return other_;
  }
  return {};
}

std::string ConceptKind::spec() const {
  return tag_ == Tag::other ? "other:" + other_ : name();
}

namespace {

std::optional<std::string> ec_field(std::string_view f) {
  if (f == "-") return std::string("-");
  if (f.empty()) return std::nullopt;
  for (char c : f) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  std::size_t first = f.find_first_not_of('0');
  if (first == std::string_view::npos) return std::nullopt;  // zero is not positive
  return std::string(f.substr(first));
}

}  // namespace

std::optional<std::string> try_normalize_ec(std::string_view raw) {
  std::string s = text::trim(raw);
  while (!s.empty() && (s.back() == ';' || text::is_space(s.back()))) s.pop_back();

  std::string_view body = s;
  if (body.size() >= 2 && text::fold_char(body[0]) == 'e' && text::fold_char(body[1]) == 'c') {
    body.remove_prefix(2);
    bool colon = false;
    while (!body.empty() && (text::is_space(body.front()) || (!colon && body.front() == ':'))) {
      colon = colon || body.front() == ':';
      body.remove_prefix(1);
    }
  }
  if (body.empty()) return std::nullopt;

  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = body.find('.', start);
    auto f = ec_field(body.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (!f) return std::nullopt;
    fields.push_back(std::move(*f));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (fields.size() != 4) return std::nullopt;
  return fields[0] + "." + fields[1] + "." + fields[2] + "." + fields[3];
}

std::string normalize_ec(std::string_view raw) {
  auto r = try_normalize_ec(raw);
  if (!r) throw InvalidConceptError("invalid EC number '" + std::string(raw) + "'");
  return *r;
}

std::string canonicalize(const ConceptKind& kind, std::string_view raw) {
  switch (kind.tag()) {
    case ConceptKind::Tag::ec_number:
      return normalize_ec(raw);
    case ConceptKind::Tag::compound_name: {
      auto s = text::normalize_surface(raw);
      if (s.empty()) throw InvalidConceptError("empty compound name");
      return s;
    }
    case ConceptKind::Tag::taxon: {
      auto s = text::trim(raw);
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidConceptError("invalid taxon id '" + std::string(raw) + "'");
      }
      return s;
    }
    case ConceptKind::Tag::other: {
      auto s = text::collapse_whitespace(raw);
      if (s.empty()) throw InvalidConceptError("empty " + kind.name() + " concept value");
      return s;
    }
  }
  return {};
}

}  // namespace biokg
