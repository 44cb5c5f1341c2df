#pragma once

// Sentence- and fact-level alignment between a document and a condensation:
// low-threshold informativeness counts, almost-lift extraction, exact-match
// key-fact recall, and factuality through a pluggable entailment oracle.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <mutex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spotlight/error.hpp"
#include "spotlight/rouge.hpp"
#include "spotlight/textseg.hpp"

namespace spotlight {

enum class Comparator { AtLeast, Greater };

inline bool passes(double value, double threshold, Comparator cmp) {
  return cmp == Comparator::AtLeast ? value >= threshold : value > threshold;
}

struct KeyFact {
  std::string text;
  std::vector<std::string> tokens;

  static KeyFact from_text(std::string text) {
    KeyFact f;
    f.tokens = tokenize_words(text);
    if (f.tokens.empty()) throw DomainError("key fact has no tokens: '" + text + "'");
    f.text = std::move(text);
    return f;
  }
};

namespace detail {

inline void check_threshold(double th, const char* what) {
  if (!(th > 0.0 && th <= 1.0)) throw DomainError(std::string(what) + ": threshold must be in (0, 1]");
}

inline double best_f1(const SentenceProfile& s, std::span<const SentenceProfile> others,
                      RougeVariant variant) {
  double best = 0.0;
  for (const auto& o : others) best = std::max(best, rouge(s, o, variant).f1);
  return best;
}

inline bool contains_run(std::span<const std::string> haystack,
                         std::span<const std::string> needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace detail

/// Number of document sentences whose best F1 against any condensation
/// sentence passes `th` (inclusive by default).
inline std::size_t informativeness_count(std::span<const SentenceProfile> doc_sentences,
                                         std::span<const SentenceProfile> cond_sentences,
                                         double th = 0.3,
                                         RougeVariant variant = RougeVariant::R1,
                                         Comparator cmp = Comparator::AtLeast) {
  detail::check_threshold(th, "informativeness_count");
  if (doc_sentences.empty()) throw DomainError("informativeness_count: empty document");
  std::size_t count = 0;
  for (const auto& d : doc_sentences) {
    bool hit = false;
    for (const auto& c : cond_sentences) {
      if (passes(rouge(c, d, variant).f1, th, cmp)) {
        hit = true;
        break;
      }
    }
    if (hit) ++count;
  }
  return count;
}

struct LiftResult {
  std::size_t count = 0;
  double fraction = 0.0;
};

/// Condensation sentences that are almost-lifts of some document sentence:
/// best F1 strictly above `th` by default.
inline LiftResult extraction_lifts(std::span<const SentenceProfile> doc_sentences,
                                   std::span<const SentenceProfile> cond_sentences,
                                   double th = 0.8, RougeVariant variant = RougeVariant::R1,
                                   Comparator cmp = Comparator::Greater) {
  detail::check_threshold(th, "extraction_lifts");
  if (cond_sentences.empty()) throw DomainError("extraction_lifts: empty condensation");
  LiftResult r;
  for (const auto& c : cond_sentences)
    if (!doc_sentences.empty() && passes(detail::best_f1(c, doc_sentences, variant), th, cmp))
      ++r.count;
  r.fraction = static_cast<double>(r.count) / static_cast<double>(cond_sentences.size());
  return r;
}

/// Fraction of facts whose full token sequence occurs contiguously in the
/// condensation's token stream.
inline double keyfact_recall(std::span<const KeyFact> facts,
                             std::span<const std::string> condensation_tokens) {
  if (facts.empty()) throw DomainError("keyfact_recall: empty fact list");
  std::size_t found = 0;
  for (const auto& f : facts)
    if (detail::contains_run(condensation_tokens, f.tokens)) ++found;
  return static_cast<double>(found) / static_cast<double>(facts.size());
}

// ---------------------------------------------------------------------------
// Factuality

/// Everything an entailment oracle may consult for one verdict.
struct FactQuery {
  std::string_view record_id;
  std::string_view kind;  // "spotlight" or "summary"
  std::size_t fact_index = 0;
  const KeyFact& fact;
  std::span<const std::string> document_tokens;
};

/// Returns true when the fact is supported by the document. Failures must be
/// reported by throwing OracleError.
using EntailmentOracle = std::function<bool(const FactQuery&)>;

/// Default oracle: the fact's tokens appear contiguously in the document.
inline bool containment_oracle(const FactQuery& q) {
  return detail::contains_run(q.document_tokens, q.fact.tokens);
}

/// Wraps an oracle that is not safe for concurrent calls.
inline EntailmentOracle serialized(EntailmentOracle oracle) {
  auto mu = std::make_shared<std::mutex>();
  return [mu, oracle = std::move(oracle)](const FactQuery& q) {
    std::lock_guard lock(*mu);
    return oracle(q);
  };
}

struct FactSource {
  std::string_view record_id;
  std::string_view kind;
};

/// Share of condensation facts the oracle judges supported. Exceptions other
/// than OracleError thrown by the oracle are rethrown as OracleError.
inline double factuality(std::span<const KeyFact> condensation_facts,
                         std::span<const std::string> document_tokens,
                         const EntailmentOracle& oracle = containment_oracle,
                         FactSource source = {}) {
  if (condensation_facts.empty()) throw DomainError("factuality: empty fact list");
  if (!oracle) throw OracleError("factuality: no oracle supplied");
  std::size_t supported = 0;
  for (std::size_t i = 0; i < condensation_facts.size(); ++i) {
    const FactQuery q{source.record_id, source.kind, i, condensation_facts[i], document_tokens};
    bool verdict = false;
    try {
      verdict = oracle(q);
    } catch (const OracleError&) {
      throw;
    } catch (const std::exception& e) {
      throw OracleError(std::string("entailment oracle failed: ") + e.what());
    }
    if (verdict) ++supported;
  }
  return static_cast<double>(supported) / static_cast<double>(condensation_facts.size());
}

}  // namespace spotlight
