// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "spotlight/corpus.hpp"
#include "spotlight/distribution.hpp"
#include "spotlight/dpo.hpp"
#include "spotlight/facts.hpp"
#include "spotlight/readability.hpp"
#include "spotlight/report.hpp"
#include "spotlight/rouge.hpp"

#include "../readability_cases.hpp"
#include "../support.hpp"

using namespace spotlight;
using Big = boost::multiprecision::cpp_dec_float_50;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Assets bundled_assets() {
  Assets a;
  a.familiar_words = testing_support::familiar_words();
  return a;
}

// 1 ---------------------------------------------------------------------------
Outcome dpo_analytic() {
  Outcome o;
  const auto t0 = Clock::now();
  const LogProbRecord same{"same", {-1.25, -0.5}, {-3.0}, {-1.25, -0.5}, {-3.0}};
  const double l = dpo_loss(same, kDefaultBeta).loss;
  o.check(std::abs(l - std::log(2.0)) <= 1e-12, "policy == reference loss " + fmt("%.17g", l));

  const LogProbRecord worked{"w", {-1.0}, {-3.0}, {-2.0}, {-2.0}};
  const auto r = dpo_loss(worked, 0.01);
  const Big oracle = boost::multiprecision::log(1 + boost::multiprecision::exp(-Big("0.02")));
  o.check(std::abs(r.margin - 0.02) <= 1e-15, "margin " + fmt("%.17g", r.margin));
  o.check(std::abs(r.loss - oracle.convert_to<double>()) <= 1e-9, "loss vs oracle " + fmt("%.17g", r.loss));
  o.check(std::abs(r.loss - 0.6831971797266341) <= 1e-12, "loss " + fmt("%.12f", r.loss));
  const double s = seconds_since(t0);
  o.check(s < 1.0, "runtime " + fmt("%.3fs", s));
  if (o.ok) o.detail = "loss(equal)=ln 2, worked loss=" + fmt("%.6f", r.loss) + ", " + fmt("%.4fs", s);
  return o;
}

// 2 ---------------------------------------------------------------------------
std::size_t brute_lcs(const std::vector<int>& a, const std::vector<int>& b) {
  // longest subsequence of a that is also a subsequence of b
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto len = static_cast<std::size_t>(__builtin_popcount(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = len;
  }
  return best;
}

std::size_t multiset_ngrams(const std::vector<int>& a, const std::vector<int>& b, std::size_t n) {
  // n-grams over a 3-symbol alphabet encoded base 3; count table per side
  if (a.size() < n || b.size() < n) return 0;
  std::vector<int> ca(729, 0), cb(729, 0);
  auto code = [&](const std::vector<int>& s, std::size_t i) {
    int c = 0;
    for (std::size_t k = 0; k < n; ++k) c = c * 3 + s[i + k];
    return c;
  };
  for (std::size_t i = 0; i + n <= a.size(); ++i) ++ca[code(a, i)];
  for (std::size_t i = 0; i + n <= b.size(); ++i) ++cb[code(b, i)];
  std::size_t m = 0;
  for (std::size_t k = 0; k < ca.size(); ++k) m += static_cast<std::size_t>(std::min(ca[k], cb[k]));
  return m;
}

Outcome rouge_exhaustive() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<std::vector<int>> seqs = {{}};
  for (std::size_t len = 1; len <= 6; ++len) {
    std::size_t count = 1;
    for (std::size_t k = 0; k < len; ++k) count *= 3;
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<int> s(len);
      std::size_t x = c;
      for (std::size_t k = 0; k < len; ++k, x /= 3) s[k] = static_cast<int>(x % 3);
      seqs.push_back(std::move(s));
    }
  }
  std::size_t pairs = 0;
  for (const auto& a : seqs) {
    for (const auto& b : seqs) {
      ++pairs;
      const std::span<const int> sa(a), sb(b);
      const std::size_t lcs = brute_lcs(a, b);
      if (lcs_length(sa, sb) != lcs) {
        o.check(false, "lcs mismatch at pair " + std::to_string(pairs));
        return o;
      }
      if (!(rouge_l(a, b) == make_overlap_score(lcs, a.size(), b.size()))) {
        o.check(false, "rouge_l score mismatch at pair " + std::to_string(pairs));
        return o;
      }
      for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t m = multiset_ngrams(a, b, n);
        if (ngram_overlap(sa, sb, n) != m) {
          o.check(false, "rouge_" + std::to_string(n) + " count mismatch at pair " + std::to_string(pairs));
          return o;
        }
        const std::size_t ua = a.size() >= n ? a.size() - n + 1 : 0, ub = b.size() >= n ? b.size() - n + 1 : 0;
        if (!(rouge_n(a, b, n) == make_overlap_score(m, ua, ub))) {
          o.check(false, "rouge_" + std::to_string(n) + " score mismatch at pair " + std::to_string(pairs));
          return o;
        }
      }
    }
  }
  const double s = seconds_since(t0);
  o.check(s < 60.0, "runtime " + fmt("%.1fs", s));
  if (o.ok) o.detail = std::to_string(pairs) + " pairs exact (LCS, n=1..3), " + fmt("%.1fs", s);
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome entropy_skew() {
  Outcome o;
  for (std::size_t c = 1; c <= 50; ++c) {
    const auto u = distribution_from_counts({c, c, c, c});
    o.check(std::abs(u.entropy_norm - 1.0) <= 1e-12, "uniform entropy " + fmt("%.17g", u.entropy_norm));
    for (std::size_t k = 0; k < 4; ++k) {
      std::array<std::size_t, 4> d{};
      d[k] = c;
      o.check(distribution_from_counts(d).entropy_norm == 0.0, "degenerate entropy nonzero");
    }
  }
  std::mt19937_64 rng(2024);
  std::vector<QuartileDistribution> suite;
  while (suite.size() < 1000) {
    std::array<std::size_t, 4> counts{};
    for (auto& x : counts) x = rng() % 7;
    const auto d = distribution_from_counts(counts);
    if (!d.empty) suite.push_back(d);
  }
  double prev = 2.0;
  for (int step = 1; step <= 100; ++step) {
    const double v = skew_at(suite, step / 100.0);
    o.check(v <= prev, "skew_at increased at k=" + fmt("%.2f", step / 100.0));
    prev = v;
  }
  o.check(skew_at(suite, 0.25) == 1.0, "skew_at(0.25) must be 1");
  if (o.ok) o.detail = "uniform=1, degenerate=0, skew_at non-increasing over 1000 distributions";
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome readability_hand() {
  Outcome o;
  for (const auto& c : readability_cases::hand_cases()) {
    const auto s = compute_token_stats(c.text, c.familiar);
    o.check(s.word_count == c.W && s.sentence_count == c.S && s.syllable_count == c.Y &&
                s.complex_word_count == c.C && s.difficult_word_count == c.D && s.polysyllable_count == c.P,
            std::string(c.name) + ": counts differ");
    const auto r = compute_readability(s);
    const double got[6] = {r.fk_grade, r.fre, r.fog, r.dale_chall, r.smog, r.forcast};
    const double want[6] = {c.fk, c.fre, c.fog, c.dale_chall, c.smog, c.forcast};
    for (int i = 0; i < 6; ++i)
      o.check(std::abs(got[i] - want[i]) <= 1e-9, std::string(c.name) + ": score " + std::to_string(i) + " = " +
                                                      fmt("%.12g", got[i]) + " expected " + fmt("%.12g", want[i]));
  }
  if (o.ok) {
    const auto r = compute_readability(compute_token_stats("A cat sat.", {}));
    o.detail = "5 texts x 6 scores; A cat sat. fk=" + fmt("%.2f", r.fk_grade) + " fre=" + fmt("%.2f", r.fre);
  }
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome filtering() {
  Outcome o;
  const auto records = load_corpus(testing_support::fixture("filter_12.jsonl"), true).records;
  const auto [kept, rep] = filter_records(records, {});
  o.check(rep.total == 12 && rep.kept == 6, "kept " + std::to_string(rep.kept) + " of " + std::to_string(rep.total));
  o.check(rep.dropped_special_chars == 2 && rep.dropped_incomplete == 2 && rep.dropped_unfaithful_terms == 2,
          "per-rule counts " + std::to_string(rep.dropped_special_chars) + "," +
              std::to_string(rep.dropped_incomplete) + "," + std::to_string(rep.dropped_unfaithful_terms));
  const auto [again, rep2] = filter_records(kept, {});
  o.check(rep2.kept == kept.size(), "re-filter dropped " + std::to_string(kept.size() - rep2.kept));
  if (o.ok) o.detail = "kept=6 (2,2,2), re-filter drops 0";
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome directional() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto records = load_corpus(testing_support::fixture("directional_20.jsonl"), true).records;
  const auto facts = load_facts(testing_support::fixture("directional_20.facts.jsonl"));
  CharacterizeOptions opts;
  opts.facts = &facts;
  const auto rows = characterize_corpus(records, bundled_assets(), opts);
  const auto verdicts = compare_all(rows);
  o.check(verdicts.size() == 1, "expected one spotlight/summary pair");
  if (!o.ok) return o;
  for (const char* f : {"entropy", "skew50", "compactness", "flesch_reading_ease", "extraction", "informativeness"})
    o.check(verdicts[0].at(f).matches_expected(),
            std::string(f) + " is " + std::string(to_string(verdicts[0].at(f).spotlight_vs_summary)));
  const double s = seconds_since(t0);
  o.check(s < 5.0, "runtime " + fmt("%.2fs", s));
  if (o.ok) o.detail = "six orderings hold on 20 records, " + fmt("%.2fs", s);
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome published_directions() {
  // The published corpora are not bundled, so absolute values cannot be
  // recomputed. What can be checked is that the comparison reads every
  // published row pair as the expected direction.
  Outcome o;
  struct Pair {
    const char* tag;
    double spot[6], summ[6];  // entropy, skew50, compactness, fre, extraction, informativeness
  };
  const Pair pairs[] = {
      {"news", {0.69, 0.61, 0.52, 15.46, 0.021, 0.061}, {0.96, 0.02, 1.53, 9.45, 0.011, 0.143}},
      {"cspubsum", {0.62, 0.47, 0.62, 9.67, 0.109, 0.042}, {0.96, 0.01, 1.28, 6.42, 0.100, 0.112}},
      {"wikipedia", {0.76, 0.29, 0.82, 16.26, 0.032, 0.030}, {0.95, 0.05, 1.48, 9.35, 0.025, 0.239}},
      {"research_presentation", {0.65, 0.36, 0.28, 44.10, 0.052, 0.069}, {0.92, 0.04, 0.69, 23.83, 0.026, 0.315}},
  };
  const char* names[6] = {"entropy", "skew50", "compactness", "flesch_reading_ease", "extraction", "informativeness"};
  double FeatureRow::*fields[6] = {&FeatureRow::entropy_mean, &FeatureRow::skew50,
                                   &FeatureRow::compactness_mean, &FeatureRow::fre_mean,
                                   &FeatureRow::extraction_count_mean, &FeatureRow::informativeness};
  for (const auto& p : pairs) {
    FeatureRow a, b;
    a.dataset_tag = b.dataset_tag = p.tag;
    a.kind = CondensationKind::Spotlight;
    b.kind = CondensationKind::Summary;
    for (int i = 0; i < 6; ++i) {
      a.*fields[i] = p.spot[i];
      b.*fields[i] = p.summ[i];
    }
    const auto v = compare_kinds(a, b);
    for (const char* n : names)
      o.check(v.at(n).matches_expected(), std::string(p.tag) + " " + n + " not in expected direction");
  }
  if (o.ok)
    o.detail = "4 published row pairs read in the expected direction; absolute values need the original corpora";
  return o;
}

// 8 ---------------------------------------------------------------------------
Outcome determinism() {
  Outcome o;
  const std::string base = " metrics -i " + testing_support::fixture("directional_20.jsonl") + " --facts " +
                           testing_support::fixture("directional_20.facts.jsonl");
  const auto one = testing_support::run(testing_support::cli() + " --threads 1" + base);
  const auto eight = testing_support::run(testing_support::cli() + " --threads 8" + base);
  o.check(one.exit_code == 0 && eight.exit_code == 0, "metrics exited nonzero");
  o.check(!one.output.empty() && one.output == eight.output, "outputs differ");
  if (o.ok) o.detail = std::to_string(one.output.size()) + " bytes identical for 1 and 8 threads";
  return o;
}

// 9 ---------------------------------------------------------------------------
std::vector<CorpusRecord> synthetic_corpus(std::size_t n, std::size_t words_per_doc) {
  std::mt19937_64 rng(99);
  std::vector<std::string> vocab;
  const char* syll[] = {"ba", "ko", "ri", "te", "lu", "ma", "sen", "dor", "vi", "pa", "quo", "zel"};
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      for (int c = 0; c < 3; ++c) vocab.push_back(std::string(syll[a]) + syll[b] + (c ? syll[(a + b + c) % 12] : ""));
  auto sentence = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) s += ' ';
      s += vocab[rng() % vocab.size()];
    }
    s[0] = static_cast<char>(std::toupper(s[0]));
    return s + ".";
  };
  std::vector<CorpusRecord> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> sents;
    for (std::size_t w = 0; w < words_per_doc; w += 16) sents.push_back(sentence(16));
    std::string doc;
    for (const auto& s : sents) doc += s + ' ';
    const std::size_t pick = rng() % (sents.size() - 1);
    std::string summ;
    for (int k = 0; k < 4; ++k) summ += sentence(20) + ' ';
    out.push_back(make_record("s" + std::to_string(r), doc, sents[pick] + ' ' + sents[pick + 1], summ,
                              std::string(r % 4 == 0 ? "a" : "b")));
  }
  return out;
}

Outcome throughput() {
  Outcome o;
  const auto records = synthetic_corpus(10000, 500);
  const auto t0 = Clock::now();
  CharacterizeOptions opts;
  opts.threads = 1;
  const auto rows = characterize_corpus(records, bundled_assets(), opts);
  const double s = seconds_since(t0);
  o.check(rows.size() == 4, "expected 4 rows");
  o.check(s < 120.0, "runtime " + fmt("%.1fs", s));
  if (o.ok) o.detail = "10000 records x ~500 words on 1 thread in " + fmt("%.1fs", s);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dpo analytic", dpo_analytic},
      {"rouge exhaustive oracle", rouge_exhaustive},
      {"entropy and skew properties", entropy_skew},
      {"readability hand oracle", readability_hand},
      {"filtering", filtering},
      {"directional fixture", directional},
      {"published row directions", published_directions},
      {"thread determinism", determinism},
      {"throughput", throughput},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
