#pragma once

// Corpus characterization: per-record metrics for every condensation,
// aggregated into one FeatureRow per (dataset tag, kind); directional
// spotlight-versus-summary comparison; CSV / key=value / aligned-table
// output.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <istream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "spotlight/alignment.hpp"
#include "spotlight/compactness.hpp"
#include "spotlight/config.hpp"
#include "spotlight/corpus.hpp"
#include "spotlight/distribution.hpp"
#include "spotlight/error.hpp"
#include "spotlight/facts.hpp"
#include "spotlight/readability.hpp"
#include "spotlight/rouge.hpp"
#include "spotlight/textseg.hpp"

namespace spotlight {

struct Assets {
  WordSet familiar_words;
  WordSet abbreviations = default_abbreviations();
};

/// Metrics of one condensation against its document. Optional fields are
/// empty when the quantity is undefined for this text (e.g. no words).
struct CondensationMetrics {
  QuartileDistribution distribution;
  std::optional<double> compactness;
  std::optional<ReadabilityScores> readability;
  double informativeness = 0.0;
  std::size_t informativeness_count = 0;
  LiftResult lifts;
  double factuality = 0.0;
  std::size_t length_words = 0;
};

struct RecordMetrics {
  std::string dataset_tag;
  CondensationMetrics spotlight;
  std::optional<CondensationMetrics> summary;
};

/// Document-side preprocessing shared by both condensations of a record.
struct PreparedDocument {
  std::vector<SentenceProfile> sentences;
  QuartileBounds bounds;
  std::vector<std::string> tokens;
};

namespace detail {

struct PreparedSentences {
  std::vector<SentenceProfile> profiles;
  std::vector<std::size_t> word_counts;
  std::vector<std::string> texts;
};

inline PreparedSentences prepare_sentences(std::string_view text, const WordSet& abbreviations,
                                           const RougeOptions& opts, Vocabulary& vocab) {
  PreparedSentences out;
  for (const auto& span : split_sentences(text, abbreviations)) {
    auto tokens = tokenize_words(span.text);
    out.word_counts.push_back(tokens.size());
    out.profiles.push_back(SentenceProfile::build(prepare_rouge_tokens(std::move(tokens), opts), vocab));
    out.texts.push_back(span.text);
  }
  return out;
}

inline CondensationMetrics measure(const Condensation& cond, const PreparedDocument& doc,
                                   const PreparedSentences& cond_sentences,
                                   const IdfTable& idf, const RecordFacts* facts,
                                   std::string_view record_id, const EntailmentOracle& oracle,
                                   const MetricConfig& cfg, const Assets& assets) {
  CondensationMetrics m;
  const auto cond_tokens = tokenize_words(cond.text());
  m.length_words = cond_tokens.size();

  // A. distribution over quartiles
  if (!cond_sentences.profiles.empty()) {
    auto assignments =
        assign_quartiles(doc.sentences, cond_sentences.profiles, doc.bounds, cfg.match_variant);
    if (cfg.drop_unmatched)
      std::erase_if(assignments, [](const QuartileAssignment& a) { return a.match_score.f1 <= 0.0; });
    if (!assignments.empty()) m.distribution = quartile_histogram(assignments);
  }

  // B. compactness
  if (!cond_tokens.empty()) m.compactness = avg_idf(cond_tokens, idf);

  // C. readability
  const auto stats = compute_token_stats(cond.text(), assets.familiar_words, assets.abbreviations);
  if (stats.word_count > 0) m.readability = compute_readability(stats, cfg.forcast_sample_words);

  // D. informativeness: key-fact recall when document facts are supplied,
  // otherwise the share of document sentences reached at the low threshold.
  m.informativeness_count =
      informativeness_count(doc.sentences, cond_sentences.profiles, cfg.informativeness_threshold,
                            cfg.report_variant, cfg.informativeness_comparator);
  if (facts && !facts->document.empty()) {
    m.informativeness = keyfact_recall(facts->document, cond_tokens);
  } else {
    m.informativeness = static_cast<double>(m.informativeness_count) /
                        static_cast<double>(doc.sentences.size());
  }

  // E. degree of extraction
  if (!cond_sentences.profiles.empty())
    m.lifts = extraction_lifts(doc.sentences, cond_sentences.profiles, cfg.extraction_threshold,
                               cfg.report_variant, cfg.extraction_comparator);

  // G. factuality; without supplied facts every sentence is one fact
  const std::vector<KeyFact>* supplied = nullptr;
  if (facts)
    supplied = cond.kind() == CondensationKind::Spotlight ? &facts->spotlight : &facts->summary;
  std::vector<KeyFact> sentence_facts;
  if (!supplied || supplied->empty()) {
    for (const auto& s : cond_sentences.texts) {
      auto toks = tokenize_words(s);
      if (!toks.empty()) sentence_facts.push_back(KeyFact{s, std::move(toks)});
    }
    supplied = &sentence_facts;
  }
  if (!supplied->empty())
    m.factuality = factuality(*supplied, doc.tokens, oracle, {record_id, to_string(cond.kind())});
  return m;
}

}  // namespace detail

/// Builds one IDF table per dataset tag from the documents carrying that tag.
inline std::map<std::string, IdfTable> build_idf_by_tag(std::span<const CorpusRecord> records) {
  std::map<std::string, std::vector<std::vector<std::string>>> docs;
  for (const auto& r : records) docs[r.dataset_tag()].push_back(tokenize_words(r.document.text));
  std::map<std::string, IdfTable> tables;
  for (auto& [tag, d] : docs) tables.emplace(tag, IdfTable::build(d));
  return tables;
}

inline RecordMetrics measure_record(const CorpusRecord& rec, const IdfTable& idf,
                                    const FactSets* facts, const EntailmentOracle& oracle,
                                    const MetricConfig& cfg, const Assets& assets) {
  Vocabulary vocab;
  PreparedDocument doc;
  auto doc_sentences = detail::prepare_sentences(rec.document.text, assets.abbreviations, cfg.rouge, vocab);
  doc.sentences = std::move(doc_sentences.profiles);
  try {
    doc.bounds = quartile_bounds(doc_sentences.word_counts);
  } catch (const DomainError&) {
    throw InputError("record '" + rec.id() + "': document has no words");
  }
  doc.tokens = tokenize_words(rec.document.text);

  const RecordFacts* rf = nullptr;
  if (facts) {
    auto it = facts->find(rec.id());
    if (it != facts->end()) rf = &it->second;
  }

  RecordMetrics out;
  out.dataset_tag = rec.dataset_tag();
  const auto spot = detail::prepare_sentences(rec.spotlight.text(), assets.abbreviations, cfg.rouge, vocab);
  out.spotlight = detail::measure(rec.spotlight, doc, spot, idf, rf, rec.id(), oracle, cfg, assets);
  if (rec.summary) {
    const auto summ = detail::prepare_sentences(rec.summary->text(), assets.abbreviations, cfg.rouge, vocab);
    out.summary = detail::measure(*rec.summary, doc, summ, idf, rf, rec.id(), oracle, cfg, assets);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

struct FeatureRow {
  std::string dataset_tag;
  CondensationKind kind = CondensationKind::Spotlight;
  std::size_t records = 0;
  double entropy_mean = 0.0;
  double skew50 = 0.0;
  double compactness_mean = 0.0;
  double fk_mean = 0.0;
  double fre_mean = 0.0;
  double fog_mean = 0.0;
  double informativeness = 0.0;
  double extraction_count_mean = 0.0;
  double factuality = 0.0;
  double length_mean = 0.0;
  double dale_chall_mean = 0.0;
  double smog_mean = 0.0;
  double forcast_mean = 0.0;
  double informativeness_count_mean = 0.0;
  double extraction_fraction_mean = 0.0;
};

namespace detail {

class Mean {
 public:
  void add(double x) {
    sum_ += x;
    ++n_;
  }
  double value() const { return n_ == 0 ? std::nan("") : sum_ / static_cast<double>(n_); }

 private:
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

struct RowAccumulator {
  std::size_t records = 0;
  std::vector<QuartileDistribution> dists;
  Mean compactness, fk, fre, fog, dale, smog, forcast, informativeness, informativeness_count,
      extraction, extraction_fraction, factuality, length;

  void add(const CondensationMetrics& m) {
    ++records;
    dists.push_back(m.distribution);
    if (m.compactness) compactness.add(*m.compactness);
    if (m.readability) {
      fk.add(m.readability->fk_grade);
      fre.add(m.readability->fre);
      fog.add(m.readability->fog);
      dale.add(m.readability->dale_chall);
      smog.add(m.readability->smog);
      forcast.add(m.readability->forcast);
    }
    informativeness.add(m.informativeness);
    informativeness_count.add(static_cast<double>(m.informativeness_count));
    extraction.add(static_cast<double>(m.lifts.count));
    extraction_fraction.add(m.lifts.fraction);
    factuality.add(m.factuality);
    length.add(static_cast<double>(m.length_words));
  }

  FeatureRow finish(std::string tag, CondensationKind kind, const MetricConfig& cfg) const {
    FeatureRow row;
    row.dataset_tag = std::move(tag);
    row.kind = kind;
    row.records = records;
    const bool any = std::any_of(dists.begin(), dists.end(), [](const auto& d) { return !d.empty; });
    if (any) {
      row.entropy_mean = cfg.entropy_mode == EntropyMode::Pooled ? pooled_entropy(dists) : mean_entropy(dists);
      row.skew50 = skew_at(dists, cfg.skew_k);
    } else {
      row.entropy_mean = row.skew50 = std::nan("");
    }
    row.compactness_mean = compactness.value();
    row.fk_mean = fk.value();
    row.fre_mean = fre.value();
    row.fog_mean = fog.value();
    row.informativeness = informativeness.value();
    row.extraction_count_mean = extraction.value();
    row.factuality = factuality.value();
    row.length_mean = length.value();
    row.dale_chall_mean = dale.value();
    row.smog_mean = smog.value();
    row.forcast_mean = forcast.value();
    row.informativeness_count_mean = informativeness_count.value();
    row.extraction_fraction_mean = extraction_fraction.value();
    return row;
  }
};

}  // namespace detail

struct CharacterizeOptions {
  MetricConfig metrics;
  std::size_t threads = 1;
  const FactSets* facts = nullptr;
  EntailmentOracle oracle = containment_oracle;
};

/// Per-record metrics computed on `threads` workers; aggregation is a
/// sequential fold in record order, so output does not depend on the thread
/// count. Rows are ordered by dataset tag, spotlight before summary.
inline std::vector<FeatureRow> characterize_corpus(std::span<const CorpusRecord> records,
                                                   const Assets& assets,
                                                   const CharacterizeOptions& opts = {}) {
  if (records.empty()) throw DomainError("characterize_corpus: empty corpus");
  const auto idf = build_idf_by_tag(records);
  const EntailmentOracle oracle = opts.metrics.oracle_serialized ? serialized(opts.oracle) : opts.oracle;

  std::vector<std::optional<RecordMetrics>> results(records.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mu;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        const auto& rec = records[i];
        results[i] = measure_record(rec, idf.at(rec.dataset_tag()), opts.facts, oracle,
                                    opts.metrics, assets);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t nthreads = std::clamp<std::size_t>(opts.threads, 1, records.size());
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::string, std::pair<detail::RowAccumulator, detail::RowAccumulator>> groups;
  for (const auto& r : results) {
    auto& g = groups[r->dataset_tag];
    g.first.add(r->spotlight);
    if (r->summary) g.second.add(*r->summary);
  }
  std::vector<FeatureRow> rows;
  for (const auto& [tag, g] : groups) {
    rows.push_back(g.first.finish(tag, CondensationKind::Spotlight, opts.metrics));
    if (g.second.records > 0) rows.push_back(g.second.finish(tag, CondensationKind::Summary, opts.metrics));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Comparison

enum class Direction { Lower, Higher, Equal };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Lower: return "lower";
    case Direction::Higher: return "higher";
    case Direction::Equal: return "equal";
  }
  return "?";
}

struct FeatureComparison {
  std::string feature;
  Direction spotlight_vs_summary = Direction::Equal;
  std::optional<Direction> expected;  // direction for a spotlight to score better

  bool matches_expected() const { return !expected || spotlight_vs_summary == *expected; }
};

struct ComparisonVerdict {
  std::string dataset_tag;
  std::vector<FeatureComparison> features;

  const FeatureComparison& at(std::string_view name) const {
    for (const auto& f : features)
      if (f.feature == name) return f;
    throw DomainError("no feature named '" + std::string(name) + "'");
  }
};

/// Feature name, accessor, and the spotlight direction implied by the
/// reporting convention (lower entropy, higher skew, and so on).
struct FeatureSpec {
  std::string_view name;
  double FeatureRow::*field;
  std::optional<Direction> expected;
};

inline const std::vector<FeatureSpec>& comparison_features() {
  static const std::vector<FeatureSpec> kFeatures = {
      {"entropy", &FeatureRow::entropy_mean, Direction::Lower},
      {"skew50", &FeatureRow::skew50, Direction::Higher},
      {"compactness", &FeatureRow::compactness_mean, Direction::Lower},
      {"flesch_kincaid", &FeatureRow::fk_mean, Direction::Lower},
      {"flesch_reading_ease", &FeatureRow::fre_mean, Direction::Higher},
      {"gunning_fog", &FeatureRow::fog_mean, Direction::Lower},
      {"informativeness", &FeatureRow::informativeness, Direction::Lower},
      {"extraction", &FeatureRow::extraction_count_mean, Direction::Higher},
      {"factuality", &FeatureRow::factuality, std::nullopt},
      {"length", &FeatureRow::length_mean, std::nullopt},
      {"dale_chall", &FeatureRow::dale_chall_mean, Direction::Lower},
      {"smog", &FeatureRow::smog_mean, Direction::Lower},
      {"forcast", &FeatureRow::forcast_mean, Direction::Lower},
  };
  return kFeatures;
}

inline ComparisonVerdict compare_kinds(const FeatureRow& a, const FeatureRow& b, double tol = 1e-9) {
  if (a.dataset_tag != b.dataset_tag)
    throw DomainError("compare_kinds: dataset tags differ ('" + a.dataset_tag + "' vs '" + b.dataset_tag + "')");
  if (a.kind == b.kind) throw DomainError("compare_kinds: both rows have the same kind");
  const FeatureRow& spot = a.kind == CondensationKind::Spotlight ? a : b;
  const FeatureRow& summ = a.kind == CondensationKind::Spotlight ? b : a;
  ComparisonVerdict v;
  v.dataset_tag = spot.dataset_tag;
  for (const auto& f : comparison_features()) {
    const double d = spot.*f.field - summ.*f.field;
    Direction dir = Direction::Equal;
    if (d > tol) {
      dir = Direction::Higher;
    } else if (d < -tol) {
      dir = Direction::Lower;
    }
    v.features.push_back({std::string(f.name), dir, f.expected});
  }
  return v;
}

/// Pairs spotlight and summary rows sharing a dataset tag.
inline std::vector<ComparisonVerdict> compare_all(std::span<const FeatureRow> rows, double tol = 1e-9) {
  std::map<std::string, std::pair<const FeatureRow*, const FeatureRow*>> by_tag;
  for (const auto& r : rows) {
    auto& slot = by_tag[r.dataset_tag];
    (r.kind == CondensationKind::Spotlight ? slot.first : slot.second) = &r;
  }
  std::vector<ComparisonVerdict> out;
  for (const auto& [tag, p] : by_tag)
    if (p.first && p.second) out.push_back(compare_kinds(*p.first, *p.second, tol));
  return out;
}

// ---------------------------------------------------------------------------
// Output

enum class ReportFormat { Csv, Text, Table };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "text") return ReportFormat::Text;
  if (s == "table") return ReportFormat::Table;
  throw ConfigError("unknown report format '" + std::string(s) + "' (use csv, text or table)");
}

namespace detail {

struct Column {
  std::string_view name;
  double FeatureRow::*field;  // null for placeholder columns
};

// CSV column order. interest_generation and mini_story depend on human
// judgments and are always "n/a".
inline const std::vector<Column>& numeric_columns() {
  static const std::vector<Column> kColumns = {
      {"entropy_mean", &FeatureRow::entropy_mean},
      {"skew50", &FeatureRow::skew50},
      {"compactness_mean", &FeatureRow::compactness_mean},
      {"fk_mean", &FeatureRow::fk_mean},
      {"fre_mean", &FeatureRow::fre_mean},
      {"fog_mean", &FeatureRow::fog_mean},
      {"informativeness", &FeatureRow::informativeness},
      {"extraction_count_mean", &FeatureRow::extraction_count_mean},
      {"interest_generation", nullptr},
      {"factuality", &FeatureRow::factuality},
      {"length_mean", &FeatureRow::length_mean},
      {"dale_chall_mean", &FeatureRow::dale_chall_mean},
      {"smog_mean", &FeatureRow::smog_mean},
      {"forcast_mean", &FeatureRow::forcast_mean},
      {"informativeness_count_mean", &FeatureRow::informativeness_count_mean},
      {"extraction_fraction_mean", &FeatureRow::extraction_fraction_mean},
      {"mini_story", nullptr},
  };
  return kColumns;
}

// Shortest representation that parses back to the same double.
inline std::string exact(double x) {
  if (!std::isfinite(x)) return "n/a";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

inline std::string fixed6(double x) {
  if (!std::isfinite(x)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline void emit_csv(std::ostream& out, std::span<const FeatureRow> rows,
                     std::span<const ComparisonVerdict> verdicts) {
  out << "dataset_tag,kind,records";
  for (const auto& c : numeric_columns()) out << ',' << c.name;
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.dataset_tag) << ',' << to_string(r.kind) << ',' << r.records;
    for (const auto& c : numeric_columns()) out << ',' << (c.field ? exact(r.*c.field) : "n/a");
    out << '\n';
  }
  if (!verdicts.empty()) {
    out << '\n' << "dataset_tag,feature,spotlight_vs_summary,expected,matches_expected\n";
    for (const auto& v : verdicts)
      for (const auto& f : v.features)
        out << csv_field(v.dataset_tag) << ',' << f.feature << ',' << to_string(f.spotlight_vs_summary)
            << ',' << (f.expected ? to_string(*f.expected) : "n/a") << ','
            << (f.matches_expected() ? "yes" : "no") << '\n';
  }
}

inline void emit_text(std::ostream& out, std::span<const FeatureRow> rows,
                      std::span<const ComparisonVerdict> verdicts) {
  bool first = true;
  for (const auto& r : rows) {
    if (!first) out << '\n';
    first = false;
    out << "[row]\n"
        << "dataset_tag=" << r.dataset_tag << '\n'
        << "kind=" << to_string(r.kind) << '\n'
        << "records=" << r.records << '\n';
    for (const auto& c : numeric_columns())
      out << c.name << '=' << (c.field ? fixed6(r.*c.field) : "n/a") << '\n';
  }
  for (const auto& v : verdicts) {
    out << "\n[comparison]\n" << "dataset_tag=" << v.dataset_tag << '\n';
    for (const auto& f : v.features)
      out << f.feature << '=' << to_string(f.spotlight_vs_summary)
          << (f.expected ? (f.matches_expected() ? " (expected)" : " (unexpected)") : "") << '\n';
  }
}

inline void emit_table(std::ostream& out, std::span<const FeatureRow> rows,
                       std::span<const ComparisonVerdict> verdicts) {
  struct Col {
    std::string_view header;
    double FeatureRow::*field;
  };
  static const std::vector<Col> kCols = {
      {"A.Entropy", &FeatureRow::entropy_mean},
      {"A.Skew50", &FeatureRow::skew50},
      {"B.Compact", &FeatureRow::compactness_mean},
      {"C.FK", &FeatureRow::fk_mean},
      {"C.FRE", &FeatureRow::fre_mean},
      {"C.Fog", &FeatureRow::fog_mean},
      {"D.Inform", &FeatureRow::informativeness},
      {"E.Extract", &FeatureRow::extraction_count_mean},
      {"F.Interest", nullptr},
      {"G.Factual", &FeatureRow::factuality},
      {"H.Length", &FeatureRow::length_mean},
  };
  std::size_t tag_width = 7;
  for (const auto& r : rows) tag_width = std::max(tag_width, r.dataset_tag.size());
  auto pad = [](std::string s, std::size_t w, bool left) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
  };
  const std::size_t w = 12;
  out << pad("Dataset", tag_width, true) << "  " << pad("Kind", 4, true);
  for (const auto& c : kCols) out << ' ' << pad(std::string(c.header), w, false);
  out << '\n';
  for (const auto& r : rows) {
    out << pad(r.dataset_tag, tag_width, true) << "  "
        << (r.kind == CondensationKind::Spotlight ? "Spot" : "Summ");
    for (const auto& c : kCols) out << ' ' << pad(c.field ? fixed6(r.*c.field) : "n/a", w, false);
    out << '\n';
  }
  for (const auto& v : verdicts) {
    out << '\n' << "Spot vs Summ (" << v.dataset_tag << "):";
    for (const auto& f : v.features) {
      if (!f.expected) continue;
      out << ' ' << f.feature << '=' << to_string(f.spotlight_vs_summary) << (f.matches_expected() ? "" : "!");
    }
    out << '\n';
  }
}

}  // namespace detail

inline void emit_report(std::ostream& out, std::span<const FeatureRow> rows,
                        std::span<const ComparisonVerdict> verdicts, ReportFormat format) {
  if (rows.empty()) throw DomainError("emit_report: no rows");
  switch (format) {
    case ReportFormat::Csv: detail::emit_csv(out, rows, verdicts); break;
    case ReportFormat::Text: detail::emit_text(out, rows, verdicts); break;
    case ReportFormat::Table: detail::emit_table(out, rows, verdicts); break;
  }
}

inline std::string render_report(std::span<const FeatureRow> rows,
                                 std::span<const ComparisonVerdict> verdicts, ReportFormat format) {
  std::ostringstream ss;
  emit_report(ss, rows, verdicts, format);
  return ss.str();
}

/// Reads the feature-row block of a CSV report (stops at the first blank line).
inline std::vector<FeatureRow> parse_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("feature CSV is empty");
  const auto header = detail::split_csv_line(line);
  const auto& cols = detail::numeric_columns();
  if (header.size() != cols.size() + 3 || header[0] != "dataset_tag" || header[1] != "kind" ||
      header[2] != "records")
    throw InputError("feature CSV: unexpected header");
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (header[i + 3] != cols[i].name) throw InputError("feature CSV: unexpected column '" + header[i + 3] + "'");

  std::vector<FeatureRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") break;
    const auto f = detail::split_csv_line(line);
    const std::string where = "feature CSV line " + std::to_string(lineno);
    if (f.size() != header.size()) throw InputError(where + ": wrong field count");
    FeatureRow r;
    r.dataset_tag = f[0];
    if (f[1] == "spotlight") {
      r.kind = CondensationKind::Spotlight;
    } else if (f[1] == "summary") {
      r.kind = CondensationKind::Summary;
    } else {
      throw InputError(where + ": bad kind '" + f[1] + "'");
    }
    {
      const auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.records);
      if (ec != std::errc() || p != f[2].data() + f[2].size()) throw InputError(where + ": bad record count");
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!cols[i].field) continue;
      const std::string& s = f[i + 3];
      double x = std::nan("");
      if (s != "n/a") {
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
        if (ec != std::errc() || p != s.data() + s.size())
          throw InputError(where + ": bad number '" + s + "'");
      }
      r.*cols[i].field = x;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace spotlight
