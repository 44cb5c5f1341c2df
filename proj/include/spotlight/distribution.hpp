#pragma once

// Coverage of a condensation over the four word-balanced quartiles of its
// source document: per-sentence quartile assignment, the normalized entropy
// of the resulting 4-bin histogram, and the corpus-level SkewK fraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spotlight/error.hpp"
#include "spotlight/rouge.hpp"

namespace spotlight {

struct QuartileBounds {
  std::array<std::size_t, 4> segment_words{};
  std::array<std::size_t, 5> boundaries{};  // word offsets; boundaries[4] = total words
  std::vector<int> sentence_quartile;       // 1..4 per document sentence
};

/// Word-balanced quartiles (remainder words go to the earliest segments).
/// Each sentence lands in the segment containing its word midpoint.
inline QuartileBounds quartile_bounds(std::span<const std::size_t> sentence_word_counts) {
  std::size_t total = 0;
  for (auto c : sentence_word_counts) total += c;
  if (total == 0) throw DomainError("quartile_bounds: document has no words");

  QuartileBounds qb;
  for (std::size_t k = 0; k < 4; ++k) {
    qb.segment_words[k] = total / 4 + (k < total % 4 ? 1 : 0);
    qb.boundaries[k + 1] = qb.boundaries[k] + qb.segment_words[k];
  }
  qb.sentence_quartile.reserve(sentence_word_counts.size());
  std::size_t start = 0;
  for (auto len : sentence_word_counts) {
    // doubled midpoint keeps the comparison in integers
    const std::size_t mid2 = 2 * start + len;
    int q = 4;
    for (int k = 0; k < 4; ++k) {
      if (mid2 < 2 * qb.boundaries[k + 1]) {
        q = k + 1;
        break;
      }
    }
    qb.sentence_quartile.push_back(q);
    start += len;
  }
  return qb;
}

struct QuartileAssignment {
  std::size_t cond_sentence_index = 0;
  std::size_t matched_doc_sentence_index = 0;
  int quartile = 1;
  OverlapScore match_score;
};

/// Matches every condensation sentence to the document sentence with the
/// highest F1 under `variant`; ties go to the earliest document sentence.
inline std::vector<QuartileAssignment> assign_quartiles(
    std::span<const SentenceProfile> doc_sentences,
    std::span<const SentenceProfile> cond_sentences, const QuartileBounds& bounds,
    RougeVariant variant = RougeVariant::R1) {
  if (doc_sentences.empty() || cond_sentences.empty())
    throw DomainError("assign_quartiles: empty sentence list");
  if (bounds.sentence_quartile.size() != doc_sentences.size())
    throw DomainError("assign_quartiles: bounds do not match document sentences");

  std::vector<QuartileAssignment> out;
  out.reserve(cond_sentences.size());
  for (std::size_t c = 0; c < cond_sentences.size(); ++c) {
    QuartileAssignment best;
    best.cond_sentence_index = c;
    best.match_score = rouge(cond_sentences[c], doc_sentences[0], variant);
    for (std::size_t d = 1; d < doc_sentences.size(); ++d) {
      const auto s = rouge(cond_sentences[c], doc_sentences[d], variant);
      if (s.f1 > best.match_score.f1) {
        best.match_score = s;
        best.matched_doc_sentence_index = d;
      }
    }
    best.quartile = bounds.sentence_quartile[best.matched_doc_sentence_index];
    out.push_back(best);
  }
  return out;
}

struct QuartileDistribution {
  std::array<std::size_t, 4> counts{};
  std::array<double, 4> probs{};
  double entropy_norm = 0.0;
  double max_share = 0.0;
  bool empty = true;  // no assignments; excluded from corpus aggregates
};

/// Shannon entropy (natural log) divided by ln 4, with 0·ln 0 = 0.
inline double normalized_entropy(const std::array<double, 4>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return std::clamp(h / std::log(4.0), 0.0, 1.0);
}

inline QuartileDistribution distribution_from_counts(const std::array<std::size_t, 4>& counts) {
  QuartileDistribution dist;
  dist.counts = counts;
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return dist;
  dist.empty = false;
  for (std::size_t k = 0; k < 4; ++k)
    dist.probs[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  dist.entropy_norm = normalized_entropy(dist.probs);
  dist.max_share = *std::max_element(dist.probs.begin(), dist.probs.end());
  return dist;
}

inline QuartileDistribution quartile_histogram(std::span<const QuartileAssignment> assignments) {
  if (assignments.empty()) throw DomainError("quartile_histogram: no assignments");
  std::array<std::size_t, 4> counts{};
  for (const auto& a : assignments) {
    if (a.quartile < 1 || a.quartile > 4) throw DomainError("quartile out of range");
    ++counts[static_cast<std::size_t>(a.quartile - 1)];
  }
  return distribution_from_counts(counts);
}

/// Fraction of non-empty distributions whose largest quartile share is >= k.
inline double skew_at(std::span<const QuartileDistribution> dists, double k = 0.5) {
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("skew_at: k must be in (0, 1]");
  std::size_t total = 0;
  std::size_t hits = 0;
  for (const auto& d : dists) {
    if (d.empty) continue;
    ++total;
    if (d.max_share >= k) ++hits;
  }
  if (total == 0) throw DomainError("skew_at: no non-empty distributions");
  return static_cast<double>(hits) / static_cast<double>(total);
}

/// Mean of per-document normalized entropies over non-empty distributions.
inline double mean_entropy(std::span<const QuartileDistribution> dists) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : dists) {
    if (d.empty) continue;
    sum += d.entropy_norm;
    ++n;
  }
  if (n == 0) throw DomainError("mean_entropy: no non-empty distributions");
  return sum / static_cast<double>(n);
}

/// Entropy of the histogram obtained by summing counts across documents.
inline double pooled_entropy(std::span<const QuartileDistribution> dists) {
  std::array<std::size_t, 4> pooled{};
  for (const auto& d : dists)
    for (std::size_t k = 0; k < 4; ++k) pooled[k] += d.counts[k];
  const auto p = distribution_from_counts(pooled);
  if (p.empty) throw DomainError("pooled_entropy: no non-empty distributions");
  return p.entropy_norm;
}

}  // namespace spotlight
