#pragma once

// Classical readability formulas evaluated from TokenStats.
//
//   W words, S sentences, Y syllables, C complex words, D difficult words,
//   P polysyllables (>= 3 syllables), M monosyllables.
//
//   Flesch-Kincaid grade  0.39 W/S + 11.8 Y/W - 15.59
//   Flesch reading ease   206.835 - 1.015 W/S - 84.6 Y/W
//   Gunning fog           0.4 (W/S + 100 C/W)
//   Dale-Chall            0.1579 (100 D/W) + 0.0496 W/S, + 3.6365 when D/W > 0.05
//   SMOG                  1.0430 sqrt(30 P/S) + 3.1291
//   FORCAST               20 - M150/10, M150 = monosyllables per 150 words

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "spotlight/error.hpp"
#include "spotlight/textseg.hpp"

namespace spotlight {

struct ReadabilityScores {
  double fk_grade = 0.0;
  double fre = 0.0;
  double fog = 0.0;
  double dale_chall = 0.0;
  double smog = 0.0;
  double forcast = 0.0;
};

/// FORCAST's monosyllable count normalized to a 150-word sample. The sample
/// is the first `sample_words` words; shorter texts are scaled up.
inline double forcast_monosyllables_per_150(const TokenStats& stats, std::size_t sample_words) {
  const std::size_t window = std::min(stats.word_count, sample_words);
  double mono = 0.0;
  if (stats.monosyllabic.size() == stats.word_count) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < window; ++i) m += stats.monosyllabic[i] ? 1 : 0;
    mono = static_cast<double>(m);
  } else {
    mono = static_cast<double>(stats.monosyllable_count) * static_cast<double>(window) /
           static_cast<double>(stats.word_count);
  }
  return mono * 150.0 / static_cast<double>(window);
}

inline ReadabilityScores compute_readability(const TokenStats& stats,
                                             std::size_t sample_words = 150) {
  if (stats.word_count == 0 || stats.sentence_count == 0)
    throw DomainError("compute_readability: text needs at least one sentence and one word");
  if (sample_words == 0) throw DomainError("compute_readability: sample_words must be positive");

  const double w = static_cast<double>(stats.word_count);
  const double s = static_cast<double>(stats.sentence_count);
  const double words_per_sentence = w / s;
  const double syllables_per_word = static_cast<double>(stats.syllable_count) / w;
  const double difficult_share = static_cast<double>(stats.difficult_word_count) / w;

  ReadabilityScores r;
  r.fk_grade = 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59;
  r.fre = 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word;
  r.fog = 0.4 * (words_per_sentence + 100.0 * static_cast<double>(stats.complex_word_count) / w);
  r.dale_chall = 0.1579 * (100.0 * difficult_share) + 0.0496 * words_per_sentence;
  if (difficult_share > 0.05) r.dale_chall += 3.6365;
  r.smog = 1.0430 * std::sqrt(static_cast<double>(stats.polysyllable_count) * 30.0 / s) + 3.1291;
  r.forcast = 20.0 - forcast_monosyllables_per_150(stats, sample_words) / 10.0;
  return r;
}

}  // namespace spotlight
