#pragma once

#include <string>
#include <string_view>

namespace biokg::text {

// ASCII-only case folding; bytes >= 0x80 pass through untouched so UTF-8
// sequences survive intact.
char fold_char(char c);
std::string fold_case(std::string_view s);

bool is_space(char c);

// Word characters for boundary checks: ASCII alphanumerics, '_' and any
// non-ASCII byte.
bool is_word_char(char c);

std::string trim(std::string_view s);

// Trims, then replaces every whitespace run with a single ' '.
std::string collapse_whitespace(std::string_view s);

// fold_case + collapse_whitespace. Used for gazetteer keys and
// compound-name canonicalization.
std::string normalize_surface(std::string_view s);

// "Molecular mass" -> "molecular_mass". Non-alphanumerics become '_',
// runs are squeezed, leading/trailing '_' dropped.
std::string to_snake_key(std::string_view s);

bool is_snake_key(std::string_view s);

}  // namespace biokg::text
