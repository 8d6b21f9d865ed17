#include <gtest/gtest.h>

#include "biokg/text.hpp"

namespace biokg::text {
namespace {

TEST(Text, FoldCaseIsAsciiOnly) {
  EXPECT_EQ(fold_case("TreHALose"), "trehalose");
  EXPECT_EQ(fold_case("\xC3\x89tude"), "\xC3\x89tude");
}

TEST(Text, CollapseWhitespaceTrimsAndSqueezes) {
  EXPECT_EQ(collapse_whitespace("  alpha \t\n beta  "), "alpha beta");
  EXPECT_EQ(collapse_whitespace("   "), "");
}

TEST(Text, NormalizeSurfaceFoldsAndCollapses) {
  EXPECT_EQ(normalize_surface(" Trehalose   6-Phosphate "), "trehalose 6-phosphate");
}

TEST(Text, WordCharacters) {
  EXPECT_TRUE(is_word_char('a'));
  EXPECT_TRUE(is_word_char('7'));
  EXPECT_TRUE(is_word_char('_'));
  EXPECT_TRUE(is_word_char('\xC3'));
  EXPECT_FALSE(is_word_char('-'));
  EXPECT_FALSE(is_word_char(' '));
}

TEST(Text, SnakeKeys) {
  EXPECT_EQ(to_snake_key("Molecular mass"), "molecular_mass");
  EXPECT_EQ(to_snake_key("  Melting point (C) "), "melting_point_c");
  EXPECT_TRUE(is_snake_key("ec_number"));
  EXPECT_FALSE(is_snake_key("EC number"));
  EXPECT_FALSE(is_snake_key("1st"));
  EXPECT_FALSE(is_snake_key(""));
}

}  // namespace
}  // namespace biokg::text
