#include <gtest/gtest.h>

#include <random>
#include <string>

#include "spotlight/readability.hpp"
#include "readability_cases.hpp"
#include "support.hpp"

using namespace spotlight;
using namespace readability_cases;

TEST(Readability, HandOracleCounts) {
  for (const auto& c : hand_cases()) {
    SCOPED_TRACE(c.name);
    const auto s = compute_token_stats(c.text, c.familiar);
    EXPECT_EQ(s.word_count, c.W);
    EXPECT_EQ(s.sentence_count, c.S);
    EXPECT_EQ(s.syllable_count, c.Y);
    EXPECT_EQ(s.complex_word_count, c.C);
    EXPECT_EQ(s.difficult_word_count, c.D);
    EXPECT_EQ(s.polysyllable_count, c.P);
    EXPECT_EQ(s.monosyllable_count, c.M);
  }
}

TEST(Readability, HandOracleScores) {
  for (const auto& c : hand_cases()) {
    SCOPED_TRACE(c.name);
    const auto r = compute_readability(compute_token_stats(c.text, c.familiar));
    EXPECT_NEAR(r.fk_grade, c.fk, 1e-9);
    EXPECT_NEAR(r.fre, c.fre, 1e-9);
    EXPECT_NEAR(r.fog, c.fog, 1e-9);
    EXPECT_NEAR(r.dale_chall, c.dale_chall, 1e-9);
    EXPECT_NEAR(r.smog, c.smog, 1e-9);
    EXPECT_NEAR(r.forcast, c.forcast, 1e-9);
  }
}

TEST(Readability, FogFromCounts) {
  TokenStats s;
  s.word_count = 20;
  s.sentence_count = 2;
  s.syllable_count = 20;
  EXPECT_NEAR(compute_readability(s).fog, 4.0, 1e-12);
}

TEST(Readability, ForcastUsesFirstSampleWords) {
  // 150 monosyllables followed by 150 polysyllables: only the first window counts
  const std::string text = repeat("The cat sat on the mat. ", 25) + repeat("Elephants everywhere remember. ", 50);
  const auto s = compute_token_stats(text, {});
  ASSERT_EQ(s.word_count, 300u);
  EXPECT_NEAR(compute_readability(s, 150).forcast, 5.0, 1e-12);
  // a proportional estimate applies when per-word flags are missing
  auto no_flags = s;
  no_flags.monosyllabic.clear();
  EXPECT_NEAR(compute_readability(no_flags, 150).forcast, 20.0 - 75.0 / 10.0, 1e-12);
}

TEST(Readability, Errors) {
  TokenStats s;
  EXPECT_THROW(compute_readability(s), DomainError);
  s.word_count = 3;
  EXPECT_THROW(compute_readability(s), DomainError);
  s.sentence_count = 1;
  s.syllable_count = 3;
  EXPECT_THROW(compute_readability(s, 0), DomainError);
  EXPECT_NO_THROW(compute_readability(s));
}

TEST(Readability, PropertyMonotoneInSyllablesAndComplexWords) {
  std::mt19937_64 rng(51);
  for (int iter = 0; iter < 5000; ++iter) {
    TokenStats s;
    s.sentence_count = 1 + rng() % 10;
    s.word_count = s.sentence_count + rng() % 100;
    s.syllable_count = s.word_count + rng() % 100;
    s.complex_word_count = rng() % (s.word_count + 1);
    const auto base = compute_readability(s);
    auto more_y = s;
    ++more_y.syllable_count;
    const auto ry = compute_readability(more_y);
    ASSERT_LT(ry.fre, base.fre);
    ASSERT_GT(ry.fk_grade, base.fk_grade);
    if (s.complex_word_count < s.word_count) {
      auto more_c = s;
      ++more_c.complex_word_count;
      ASSERT_GT(compute_readability(more_c).fog, base.fog);
    }
  }
}

TEST(Readability, SmogInvariantUnderSelfConcatenation) {
  const std::string text = "Elephants remember everything. Scientists study their memory carefully.";
  const auto once = compute_readability(compute_token_stats(text, {}));
  const auto twice = compute_readability(compute_token_stats(text + " " + text, {}));
  EXPECT_NEAR(once.smog, twice.smog, 1e-12);
}

TEST(Readability, DaleChallEmptyListAtLeastFullList) {
  const auto& familiar = testing_support::familiar_words();
  for (const char* text : {"The dog ran home. It was late.", "Elephants remember everything carefully.",
                           "Quantum chromodynamics describes strong interactions."}) {
    const auto with_list = compute_readability(compute_token_stats(text, familiar));
    const auto without = compute_readability(compute_token_stats(text, {}));
    EXPECT_GE(without.dale_chall, with_list.dale_chall) << text;
  }
}
