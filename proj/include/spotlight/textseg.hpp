#pragma once

// Rule-based sentence segmentation, word tokenization, a vowel-group
// syllable estimator, and the token statistics consumed by the readability
// formulas.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "spotlight/error.hpp"
#include "spotlight/utf8.hpp"

namespace spotlight {

using WordSet = std::unordered_set<std::string>;

struct SentenceSpan {
  std::size_t index = 0;
  std::size_t start_char = 0;  // byte offset of the first character
  std::size_t end_char = 0;    // one past the last byte
  std::string text;
};

struct WordToken {
  std::string surface;     // as written
  std::string normalized;  // lowercased, curly apostrophe folded to '\''
  std::size_t offset = 0;  // byte offset into the source text
};

/// Loads a one-entry-per-line word list. Blank lines and lines starting with
/// '#' are ignored; entries are lowercased.
inline WordSet load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open word list: " + path);
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    words.insert(utf8::lower(std::string_view(line).substr(b)));
  }
  return words;
}

/// Abbreviations whose trailing period never ends a sentence. The same list
/// ships as assets/abbreviations.txt.
inline const WordSet& default_abbreviations() {
  static const WordSet kSet = {
      "mr.",    "mrs.",  "ms.",   "dr.",   "prof.", "sr.",   "jr.",   "st.",
      "vs.",    "etc.",  "e.g.",  "i.e.",  "fig.",  "figs.", "eq.",   "eqs.",
      "no.",    "nos.",  "vol.",  "al.",   "approx.", "inc.", "ltd.", "co.",
      "corp.",  "dept.", "univ.", "jan.",  "feb.",  "mar.",  "apr.",  "jun.",
      "jul.",   "aug.",  "sep.",  "sept.", "oct.",  "nov.",  "dec.",  "gen.",
      "gov.",   "sen.",  "rep.",  "rev.",  "lt.",   "col.",  "capt.", "sgt.",
      "mt.",    "u.s.",  "u.k.",  "ph.d.", "cf.",   "ca.",   "est.",  "pp.",
      "ch.",    "sec.",  "ref.",  "refs.", "tab.",  "dist.", "ave.",  "blvd."};
  return kSet;
}

namespace detail {

inline bool is_terminator(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

inline bool is_closer(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0x201D ||
         cp == 0x2019 || cp == 0xBB;
}

inline bool is_opener(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201C ||
         cp == 0x2018 || cp == 0xAB;
}

// The word immediately before byte offset `dot` (exclusive), lowercased, with
// the period appended.
inline std::string word_before(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0) {
    const auto c = static_cast<unsigned char>(text[b - 1]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '(' || c == '[' ||
        c == '"')
      break;
    --b;
  }
  return utf8::lower(text.substr(b, dot - b)) + ".";
}

inline bool is_initial(std::string_view word_with_dot) {
  // "J." style initials: one ASCII letter then the period.
  return word_with_dot.size() == 2 &&
         ((word_with_dot[0] >= 'a' && word_with_dot[0] <= 'z'));
}

}  // namespace detail

/// Splits text at '.', '!' or '?' (plus any closing quotes or brackets) when
/// followed by whitespace and an uppercase letter. A lone period after a
/// listed abbreviation or a single-letter initial is not a boundary.
inline std::vector<SentenceSpan> split_sentences(
    std::string_view text, const WordSet& abbreviations = default_abbreviations()) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = text.size();
  auto skip_space = [&](std::size_t i) {
    while (i < n) {
      const auto d = utf8::decode(text, i);
      if (!utf8::is_space(d.cp)) break;
      i += d.length;
    }
    return i;
  };
  auto emit = [&](std::size_t start, std::size_t end) {
    // trim trailing whitespace
    while (end > start) {
      const auto c = static_cast<unsigned char>(text[end - 1]);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        --end;
      } else {
        break;
      }
    }
    if (end > start)
      spans.push_back({spans.size(), start, end, std::string(text.substr(start, end - start))});
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    const auto d = utf8::decode(text, i);
    if (!detail::is_terminator(d.cp)) {
      i += d.length;
      continue;
    }
    const std::size_t term_begin = i;
    bool only_single_period = d.cp == '.';
    std::size_t j = i + d.length;
    while (j < n) {
      const auto e = utf8::decode(text, j);
      if (detail::is_terminator(e.cp)) {
        only_single_period = false;
      } else if (!detail::is_closer(e.cp)) {
        break;
      }
      j += e.length;
    }
    if (j >= n) break;
    const auto after = utf8::decode(text, j);
    if (!utf8::is_space(after.cp)) {
      i = j;
      continue;
    }
    std::size_t k = skip_space(j);
    if (k >= n) break;
    std::size_t probe = k;
    while (probe < n) {
      const auto o = utf8::decode(text, probe);
      if (!detail::is_opener(o.cp)) break;
      probe += o.length;
    }
    const bool capital = probe < n && utf8::is_upper(utf8::decode(text, probe).cp);
    if (capital && only_single_period) {
      const std::string w = detail::word_before(text, term_begin);
      if (abbreviations.contains(w) || detail::is_initial(w)) {
        i = k;
        continue;
      }
    }
    if (capital) {
      emit(start, j);
      start = k;
    }
    i = k;
  }
  if (start < n) emit(start, n);
  return spans;
}

/// Maximal runs of letters, digits and apostrophes. Hyphens and all other
/// punctuation separate tokens; leading and trailing apostrophes are dropped.
inline std::vector<WordToken> tokenize_surface(std::string_view text) {
  std::vector<WordToken> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    auto d = utf8::decode(text, i);
    if (!utf8::is_word_char(d.cp)) {
      i += d.length;
      continue;
    }
    std::size_t b = i;
    std::size_t e = i;
    while (e < n) {
      d = utf8::decode(text, e);
      if (!utf8::is_word_char(d.cp)) break;
      e += d.length;
    }
    i = e;
    // strip apostrophes at either end
    while (b < e) {
      const auto c = utf8::decode(text, b);
      if (!utf8::is_apostrophe(c.cp)) break;
      b += c.length;
    }
    while (e > b) {
      if (text[e - 1] == '\'') {
        --e;
      } else if (e - b >= 3 && text.substr(e - 3, 3) == "\xE2\x80\x99") {
        e -= 3;
      } else {
        break;
      }
    }
    if (b == e) continue;
    WordToken tok;
    tok.surface = std::string(text.substr(b, e - b));
    tok.offset = b;
    std::string norm;
    norm.reserve(tok.surface.size());
    for (std::size_t p = 0; p < tok.surface.size();) {
      const auto c = utf8::decode(tok.surface, p);
      utf8::append(norm, utf8::is_apostrophe(c.cp) ? U'\'' : utf8::to_lower(c.cp));
      p += c.length;
    }
    tok.normalized = std::move(norm);
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

/// Lowercased word tokens for matching (IDF, ROUGE, word lists).
inline std::vector<std::string> tokenize_words(std::string_view text) {
  auto surface = tokenize_surface(text);
  std::vector<std::string> out;
  out.reserve(surface.size());
  for (auto& t : surface) out.push_back(std::move(t.normalized));
  return out;
}

namespace detail {

inline bool is_vowel(char32_t cp) {
  switch (cp) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      break;
  }
  return (cp >= 0xE0 && cp <= 0xE6) || (cp >= 0xE8 && cp <= 0xEF) ||
         (cp >= 0xF2 && cp <= 0xF6) || (cp >= 0xF8 && cp <= 0xFD) || cp == 0xFF;
}

}  // namespace detail

/// Vowel-group syllable estimate. Counts maximal runs of a/e/i/o/u/y, adds one
/// for an "ia"/"io"/"iu" run that is not part of a -tion/-sion/-cial/-gion
/// style ending, drops a silent final 'e' (kept for consonant + "le"), and
/// never returns less than 1.
inline std::size_t count_syllables(std::string_view word) {
  std::vector<char32_t> letters;
  letters.reserve(word.size());
  for (std::size_t i = 0; i < word.size();) {
    const auto d = utf8::decode(word, i);
    if (utf8::is_letter(d.cp)) letters.push_back(utf8::to_lower(d.cp));
    i += d.length;
  }
  const std::size_t n = letters.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n;) {
    if (!detail::is_vowel(letters[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && detail::is_vowel(letters[j])) ++j;
    ++count;
    if (j - i == 2 && letters[i] == 'i' &&
        (letters[i + 1] == 'a' || letters[i + 1] == 'o' || letters[i + 1] == 'u')) {
      const char32_t prev = i > 0 ? letters[i - 1] : U'\0';
      if (prev != 't' && prev != 's' && prev != 'c' && prev != 'g' && prev != 'x') ++count;
    }
    i = j;
  }
  if (n >= 2 && letters[n - 1] == 'e' && count > 1 && !detail::is_vowel(letters[n - 2])) {
    const bool consonant_le =
        letters[n - 2] == 'l' && n >= 3 && !detail::is_vowel(letters[n - 3]);
    if (!consonant_le) --count;
  }
  return std::max<std::size_t>(count, 1);
}

struct TokenStats {
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;
  std::size_t syllable_count = 0;
  std::size_t monosyllable_count = 0;
  std::size_t polysyllable_count = 0;  // >= 3 syllables
  std::size_t complex_word_count = 0;
  std::size_t difficult_word_count = 0;
  std::size_t character_count = 0;  // code points inside word tokens
  // Per-word monosyllable flags in text order. Optional: FORCAST falls back
  // to a proportional estimate from monosyllable_count when empty.
  std::vector<bool> monosyllabic;
};

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool is_complex_word(const WordToken& tok, std::size_t syllables, bool sentence_initial) {
  if (syllables < 3) return false;
  if (!sentence_initial && utf8::is_upper(utf8::decode(tok.surface, 0).cp)) return false;
  const std::string_view w = tok.normalized;
  for (std::string_view suffix : {"es", "ed", "ing"}) {
    if (ends_with(w, suffix) && w.size() > suffix.size() &&
        count_syllables(w.substr(0, w.size() - suffix.size())) <= 2)
      return false;
  }
  return true;
}

}  // namespace detail

/// Counts for the readability formulas. Sentences without any word token are
/// not counted. A word is "difficult" when its normalized form is absent
/// from `familiar_words`.
inline TokenStats compute_token_stats(std::string_view text, const WordSet& familiar_words,
                                      const WordSet& abbreviations = default_abbreviations()) {
  TokenStats stats;
  for (const auto& span : split_sentences(text, abbreviations)) {
    const auto tokens = tokenize_surface(span.text);
    if (tokens.empty()) continue;
    ++stats.sentence_count;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto& tok = tokens[t];
      const std::size_t syl = count_syllables(tok.surface);
      ++stats.word_count;
      stats.syllable_count += syl;
      stats.character_count += utf8::length(tok.normalized);
      stats.monosyllabic.push_back(syl == 1);
      if (syl == 1) ++stats.monosyllable_count;
      if (syl >= 3) ++stats.polysyllable_count;
      if (detail::is_complex_word(tok, syl, t == 0)) ++stats.complex_word_count;
      if (!familiar_words.contains(tok.normalized)) ++stats.difficult_word_count;
    }
  }
  return stats;
}

}  // namespace spotlight
