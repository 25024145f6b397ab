// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#include <random>

#include <gtest/gtest.h>

#include "kgtrick/text.hpp"

namespace kgtrick {
namespace {

const LanguageCode en{"en"};
const LanguageCode zh{"zh"};

TEST(Normalize, FoldsCaseAndCollapsesWhitespace) {
  EXPECT_EQ(normalize("  Joe   BIDEN ", en), "joe biden");
  EXPECT_EQ(normalize("a\t\nb", en), "a b");
}

TEST(Normalize, CaselessScriptIsFixedPoint) { EXPECT_EQ(normalize("乔·拜登", zh), "乔·拜登"); }

TEST(Normalize, Empty) {
  EXPECT_EQ(normalize("", en), "");
  EXPECT_EQ(normalize(" \t ", en), "");
}

TEST(Normalize, CompatibilityForms) {
  EXPECT_EQ(normalize("ＰＡＲＩＳ", en), "paris");          // fullwidth
  EXPECT_EQ(normalize("Straße", LanguageCode("de")), "strasse");
  EXPECT_EQ(normalize("é", en), "é");            // composed
  EXPECT_EQ(normalize("x 　y", en), "x y");       // unicode spaces
  EXPECT_EQ(normalize("ÉLSA Löwenthal", en), "élsa löwenthal");
}

std::string random_text(std::mt19937& rng, bool ascii_only) {
  static const std::vector<std::string> pieces = {"a",  "Z",  " ",   "\t", "Q9", "-",  ".",        "|",
                                                  "é",  "Ä",  "ß",   "ﬁ",  "乔", "·",  "　",   "Ｐ",
                                                  "İ",  "ς",  "\n",  "ก",  "한", "ي",  "é", "  "};
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, ascii_only ? 6 : pieces.size() - 1);
  std::string out;
  for (int i = len(rng); i > 0; --i) out += pieces[pick(rng)];
  return out;
}

TEST(NormalizeProperty, Idempotent) {
  std::mt19937 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const auto text = random_text(rng, false);
    const auto once = normalize(text, en);
    EXPECT_EQ(normalize(once, en), once) << text;
  }
}

TEST(NormalizeProperty, AsciiFastPathMatchesIcu) {
  std::mt19937 rng(11);
  for (int i = 0; i < 5000; ++i) {
    std::string text;
    std::uniform_int_distribution<int> len(0, 16), ch(0, 127);
    for (int n = len(rng); n > 0; --n) text.push_back(static_cast<char>(ch(rng)));
    EXPECT_EQ(detail::normalize_ascii(text), detail::normalize_icu(text)) << i;
  }
}

TEST(Tokenize, SpaceDelimited) {
  EXPECT_EQ(tokenize(" Capital  of France ", en), (std::vector<std::string>{"capital", "of", "france"}));
  EXPECT_TRUE(tokenize("", en).empty());
}

TEST(Tokenize, CharacterUnigramsForUnsegmentedScripts) {
  EXPECT_EQ(tokenize("政治 家", zh), (std::vector<std::string>{"政", "治", "家"}));
  EXPECT_EQ(tokenize("ไทย", LanguageCode("th")).size(), 3u);
}

TEST(Language, CodeValidation) {
  EXPECT_THROW(LanguageCode("EN"), ValidationError);
  EXPECT_THROW(LanguageCode("eng"), ValidationError);
  EXPECT_EQ(LanguageCode("es").str(), "es");
  EXPECT_TRUE(LanguageCode("ja").is_unsegmented());
  EXPECT_FALSE(LanguageCode("ko").is_unsegmented());
}

TEST(Language, SetMembership) {
  const auto set = LanguageSet::defaults();
  EXPECT_EQ(set.size(), 10u);
  EXPECT_TRUE(set.parse("zh").has_value());
  EXPECT_FALSE(set.parse("xx").has_value());
  EXPECT_FALSE(set.parse("X").has_value());
  EXPECT_THROW(set.require("pt"), ValidationError);
}

}  // namespace
}  // namespace kgtrick
