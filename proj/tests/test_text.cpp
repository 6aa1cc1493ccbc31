#include <gtest/gtest.h>

#include <random>

#include "latalign/text.h"

using latalign::ComparisonForm;

TEST(ComparisonForm, FoldsCaseAndEdgePunctuation) {
  EXPECT_EQ(ComparisonForm("Hello,"), "hello");
  EXPECT_EQ(ComparisonForm("WORLD"), "world");
  EXPECT_EQ(ComparisonForm("win."), "win");
  EXPECT_EQ(ComparisonForm("(\"quoted\")"), "quoted");
  EXPECT_EQ(ComparisonForm("[x]?!;:"), "x");
}

TEST(ComparisonForm, KeepsInternalApostrophesAndHyphens) {
  EXPECT_EQ(ComparisonForm("I'm"), "i'm");
  EXPECT_EQ(ComparisonForm("Twenty-One"), "twenty-one");
  EXPECT_EQ(ComparisonForm("U.S."), "u.s");
}

TEST(ComparisonForm, PurePunctuationFoldsToEmpty) {
  EXPECT_EQ(ComparisonForm("."), "");
  EXPECT_EQ(ComparisonForm("..."), "");
}

TEST(ComparisonForm, UnicodeNfcAndLowercase) {
  // "É" decomposed (E + U+0301) and precomposed fold to the same NFC form
  EXPECT_EQ(ComparisonForm("E\xCC\x81TAT"), "\xC3\xA9tat");
  EXPECT_EQ(ComparisonForm("\xC3\x89TAT"), "\xC3\xA9tat");
  EXPECT_EQ(ComparisonForm("\xC3\x9C" "BER"), "\xC3\xBC" "ber");
}

TEST(ComparisonForm, Idempotent) {
  const std::vector<std::string> alphabet = {"A", "b", "'", "-", ".", ",", "(", "]", "\xC3\x89", "E\xCC\x81", "\xC4\xB0", "!"};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (int k = std::uniform_int_distribution<int>(1, 6)(rng); k > 0; --k)
      s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    auto once = ComparisonForm(s);
    EXPECT_EQ(ComparisonForm(once), once) << s;
  }
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(latalign::IsValidUtf8("plain"));
  EXPECT_TRUE(latalign::IsValidUtf8("\xC3\xA9"));
  EXPECT_FALSE(latalign::IsValidUtf8("\xC3"));
  EXPECT_FALSE(latalign::IsValidUtf8("\xFF\xFE"));
}

TEST(Split, WhitespaceAndFields) {
  auto words = latalign::SplitWhitespace("  a\tb\n\nc  ");
  ASSERT_EQ(words.size(), 3u);
  EXPECT_EQ(words[2], "c");
  auto fields = latalign::SplitFields("a||b|", '|');
  ASSERT_EQ(fields.size(), 4u);
  EXPECT_EQ(fields[1], "");
  EXPECT_EQ(fields[3], "");
}
