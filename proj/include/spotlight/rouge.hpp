#pragma once

// ROUGE-N (clipped n-gram overlap) and ROUGE-L (longest common subsequence)
// precision/recall/F1 over token sequences. The generic templates work on any
// totally ordered token type; SentenceProfile is a pre-indexed form over
// interned ids used by the corpus-scale metrics.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spotlight/error.hpp"

namespace spotlight {

struct OverlapScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const OverlapScore&, const OverlapScore&) = default;
};

enum class RougeVariant { R1, R2, RL };

inline std::string_view to_string(RougeVariant v) {
  switch (v) {
    case RougeVariant::R1: return "r1";
    case RougeVariant::R2: return "r2";
    case RougeVariant::RL: return "rl";
  }
  return "?";
}

/// F1 is the plain harmonic mean; zero when either side has no units.
inline OverlapScore make_overlap_score(std::size_t matches, std::size_t candidate_units,
                                       std::size_t reference_units) {
  OverlapScore s;
  if (candidate_units == 0 || reference_units == 0 || matches == 0) return s;
  s.precision = static_cast<double>(matches) / static_cast<double>(candidate_units);
  s.recall = static_cast<double>(matches) / static_cast<double>(reference_units);
  s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

/// Length of the longest common subsequence, O(|a|·|b|) time, O(|b|) memory.
template <class T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t up = row[j + 1];
      row[j + 1] = (a[i] == b[j]) ? diag + 1 : std::max(up, row[j]);
      diag = up;
    }
  }
  return row[b.size()];
}

namespace detail {

// Start offsets of all n-grams, sorted lexicographically by content.
template <class T>
std::vector<std::size_t> sorted_ngram_starts(std::span<const T> seq, std::size_t n) {
  std::vector<std::size_t> starts;
  if (seq.size() < n) return starts;
  starts.resize(seq.size() - n + 1);
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = i;
  std::sort(starts.begin(), starts.end(), [&](std::size_t x, std::size_t y) {
    return std::lexicographical_compare(seq.begin() + x, seq.begin() + x + n,
                                        seq.begin() + y, seq.begin() + y + n);
  });
  return starts;
}

// Merge-walk of two sorted multisets counting min(count_a, count_b) per key.
template <class It, class Less>
std::size_t clipped_matches(It a, It a_end, It b, It b_end, Less less) {
  std::size_t matches = 0;
  while (a != a_end && b != b_end) {
    if (less(*a, *b)) {
      ++a;
    } else if (less(*b, *a)) {
      ++b;
    } else {
      ++matches;
      ++a;
      ++b;
    }
  }
  return matches;
}

}  // namespace detail

/// Clipped n-gram match count: sum over distinct n-grams of min(count in a,
/// count in b).
template <class T>
std::size_t ngram_overlap(std::span<const T> a, std::span<const T> b, std::size_t n) {
  if (n == 0) throw DomainError("rouge_n: n must be >= 1");
  const auto sa = detail::sorted_ngram_starts(a, n);
  const auto sb = detail::sorted_ngram_starts(b, n);
  // Keys compare across the two sequences, so tag which side each offset is from.
  auto cmp = [&](std::size_t x, std::span<const T> sx, std::size_t y, std::span<const T> sy) {
    return std::lexicographical_compare(sx.begin() + x, sx.begin() + x + n, sy.begin() + y,
                                        sy.begin() + y + n);
  };
  std::size_t matches = 0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    if (cmp(sa[i], a, sb[j], b)) {
      ++i;
    } else if (cmp(sb[j], b, sa[i], a)) {
      ++j;
    } else {
      ++matches;
      ++i;
      ++j;
    }
  }
  return matches;
}

template <class T>
OverlapScore rouge_n(std::span<const T> candidate, std::span<const T> reference, std::size_t n) {
  if (n == 0) throw DomainError("rouge_n: n must be >= 1");
  const std::size_t cand_units = candidate.size() >= n ? candidate.size() - n + 1 : 0;
  const std::size_t ref_units = reference.size() >= n ? reference.size() - n + 1 : 0;
  if (cand_units == 0 || ref_units == 0) return {};
  return make_overlap_score(ngram_overlap(candidate, reference, n), cand_units, ref_units);
}

template <class T>
OverlapScore rouge_n(const std::vector<T>& candidate, const std::vector<T>& reference,
                     std::size_t n) {
  return rouge_n(std::span<const T>(candidate), std::span<const T>(reference), n);
}

template <class T>
OverlapScore rouge_l(std::span<const T> candidate, std::span<const T> reference) {
  return make_overlap_score(lcs_length(candidate, reference), candidate.size(),
                            reference.size());
}

template <class T>
OverlapScore rouge_l(const std::vector<T>& candidate, const std::vector<T>& reference) {
  return rouge_l(std::span<const T>(candidate), std::span<const T>(reference));
}

// ---------------------------------------------------------------------------
// Token preparation

struct RougeOptions {
  bool stem = false;
  bool remove_stopwords = false;
};

inline const std::unordered_set<std::string>& rouge_stopwords() {
  static const std::unordered_set<std::string> kWords = {
      "a",     "an",    "the",   "and",   "or",    "but",   "if",    "of",    "at",
      "by",    "for",   "with",  "about", "to",    "from",  "in",    "on",    "into",
      "over",  "under", "is",    "are",   "was",   "were",  "be",    "been",  "being",
      "have",  "has",   "had",   "do",    "does",  "did",   "it",    "its",   "this",
      "that",  "these", "those", "he",    "she",   "they",  "them",  "his",   "her",
      "their", "we",    "us",    "our",   "you",   "your",  "i",     "me",    "my",
      "as",    "so",    "than",  "too",   "very",  "can",   "will",  "just",  "not",
      "no",    "nor",   "only",  "own",   "same",  "such",  "then",  "there", "when",
      "where", "which", "who",   "whom",  "why",   "how",   "all",   "any",   "both",
      "each",  "few",   "more",  "most",  "other", "some",  "what",  "while", "would",
      "should", "could", "may",  "might", "must",  "also",  "up",    "down",  "out"};
  return kWords;
}

/// Light English suffix stripper (possessive, plural, -ing, -ed, -ly).
inline std::string light_stem(std::string w) {
  auto ends = [&](std::string_view s) {
    return w.size() >= s.size() && std::string_view(w).substr(w.size() - s.size()) == s;
  };
  auto has_vowel = [](std::string_view s) {
    return s.find_first_of("aeiouy") != std::string_view::npos;
  };
  if (ends("'s")) w.resize(w.size() - 2);
  if (ends("sses")) {
    w.resize(w.size() - 2);
  } else if (ends("ies") && w.size() > 4) {
    w.resize(w.size() - 3);
    w.push_back('y');
  } else if (ends("s") && !ends("ss") && !ends("us") && !ends("is") && w.size() > 3) {
    w.pop_back();
  }
  if (ends("ing") && w.size() > 5 && has_vowel(std::string_view(w).substr(0, w.size() - 3))) {
    w.resize(w.size() - 3);
  } else if (ends("ed") && w.size() > 4 &&
             has_vowel(std::string_view(w).substr(0, w.size() - 2))) {
    w.resize(w.size() - 2);
  } else if (ends("ly") && w.size() > 4) {
    w.resize(w.size() - 2);
  }
  return w;
}

inline std::vector<std::string> prepare_rouge_tokens(std::vector<std::string> tokens,
                                                     const RougeOptions& opts) {
  if (!opts.stem && !opts.remove_stopwords) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    if (opts.remove_stopwords && rouge_stopwords().contains(t)) continue;
    out.push_back(opts.stem ? light_stem(std::move(t)) : std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interned, pre-indexed sentences

class Vocabulary {
 public:
  std::uint32_t intern(const std::string& token) {
    auto [it, inserted] = ids_.try_emplace(token, static_cast<std::uint32_t>(ids_.size()));
    return it->second;
  }
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// A sentence as interned ids with its sorted unigram and bigram multisets.
struct SentenceProfile {
  std::vector<std::uint32_t> ids;
  std::vector<std::uint32_t> unigrams;
  std::vector<std::uint64_t> bigrams;

  static SentenceProfile build(const std::vector<std::string>& tokens, Vocabulary& vocab) {
    SentenceProfile p;
    p.ids.reserve(tokens.size());
    for (const auto& t : tokens) p.ids.push_back(vocab.intern(t));
    p.unigrams = p.ids;
    std::sort(p.unigrams.begin(), p.unigrams.end());
    if (p.ids.size() >= 2) {
      p.bigrams.reserve(p.ids.size() - 1);
      for (std::size_t i = 0; i + 1 < p.ids.size(); ++i)
        p.bigrams.push_back((std::uint64_t{p.ids[i]} << 32) | p.ids[i + 1]);
      std::sort(p.bigrams.begin(), p.bigrams.end());
    }
    return p;
  }
};

/// Same values as rouge_n(n=1|2)/rouge_l on the underlying token sequences.
inline OverlapScore rouge(const SentenceProfile& candidate, const SentenceProfile& reference,
                          RougeVariant variant) {
  switch (variant) {
    case RougeVariant::R1:
      return make_overlap_score(
          detail::clipped_matches(candidate.unigrams.begin(), candidate.unigrams.end(),
                                  reference.unigrams.begin(), reference.unigrams.end(),
                                  std::less<>{}),
          candidate.unigrams.size(), reference.unigrams.size());
    case RougeVariant::R2:
      return make_overlap_score(
          detail::clipped_matches(candidate.bigrams.begin(), candidate.bigrams.end(),
                                  reference.bigrams.begin(), reference.bigrams.end(),
                                  std::less<>{}),
          candidate.bigrams.size(), reference.bigrams.size());
    case RougeVariant::RL:
      return rouge_l(std::span<const std::uint32_t>(candidate.ids),
                     std::span<const std::uint32_t>(reference.ids));
  }
  return {};
}

}  // namespace spotlight
