// spotlight: command-line front end for corpus ingestion, filtering,
// characterization, comparison, preference-pair export and DPO evaluation.
//
// Exit codes: 0 success, 1 input error, 2 configuration or usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spotlight/compactness.hpp"
#include "spotlight/config.hpp"
#include "spotlight/corpus.hpp"
#include "spotlight/dpo.hpp"
#include "spotlight/facts.hpp"
#include "spotlight/report.hpp"

#ifndef SPOTLIGHT_DEFAULT_ASSETS
#define SPOTLIGHT_DEFAULT_ASSETS "assets"
#endif

namespace {

using namespace spotlight;

constexpr int kInputError = 1;
constexpr int kConfigError = 2;

// Writes to a file, or stdout for "-" / empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InputError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close(const std::string& path) {
    if (file_) {
      file_->close();
      if (!*file_) throw InputError("failed writing " + path);
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Globals {
  std::string config_path;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  // key=value

  Config resolve() const {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(detail::trim(std::string_view(kv).substr(0, eq)), detail::trim(std::string_view(kv).substr(eq + 1)));
    }
    if (threads) {
      if (*threads == 0) throw ConfigError("--threads must be positive");
      cfg.threads = *threads;
    }
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

std::vector<CorpusRecord> read_corpus(const std::string& path, bool strict) {
  auto res = load_corpus(path, strict);
  if (res.skipped > 0) std::cerr << "skipped " << res.skipped << " malformed line(s) in " << path << '\n';
  return std::move(res.records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spotlight corpus toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Flat key=value configuration file");
  app.add_option("--set", g.overrides, "Override one configuration key (key=value), repeatable");
  app.add_option("--threads", g.threads, "Worker threads for metric computation");
  app.add_option("--seed", g.seed, "Seed for the two-stage split");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a record file and write it in canonical form");
  std::string ingest_in, ingest_out = "-", idf_dir;
  bool lenient = false;
  ingest->add_option("--input,-i", ingest_in, "Record file (JSONL)")->required();
  ingest->add_option("--out,-o", ingest_out, "Canonical output (default stdout)");
  ingest->add_flag("--lenient", lenient, "Skip malformed lines instead of failing");
  ingest->add_option("--idf-dir", idf_dir, "Also write one IDF table per dataset tag into this directory");

  // filter
  auto* filter = app.add_subcommand("filter", "Drop records whose summary fails the quality rules");
  std::string filter_in, filter_out = "-", filter_report;
  std::optional<double> special_threshold;
  filter->add_option("--input,-i", filter_in, "Record file (JSONL)")->required();
  filter->add_option("--out,-o", filter_out, "Kept records (default stdout)");
  filter->add_option("--report", filter_report, "Per-rule drop counts (key=value)");
  filter->add_option("--special-char-threshold", special_threshold, "Maximum share of special characters");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Characterize spotlights and summaries per dataset tag");
  std::string metrics_in, facts_path, verdicts_path, familiar_path, abbrev_path, metrics_out = "-";
  std::string format = "csv";
  bool no_compare = false;
  metrics->add_option("--input,-i", metrics_in, "Record file (JSONL)")->required();
  metrics->add_option("--facts", facts_path, "Key-fact file (JSONL)");
  metrics->add_option("--verdicts", verdicts_path, "Recorded entailment verdicts (JSONL)");
  metrics->add_option("--familiar", familiar_path, "Familiar-word list (default: bundled list)");
  metrics->add_option("--abbreviations", abbrev_path, "Abbreviation list (default: built-in list)");
  metrics->add_option("--format", format, "csv, text or table");
  metrics->add_option("--out,-o", metrics_out, "Report destination (default stdout)");
  metrics->add_flag("--no-compare", no_compare, "Omit the spotlight/summary comparison block");

  // compare
  auto* compare = app.add_subcommand("compare", "Directional comparison from a metrics CSV");
  std::string compare_in, compare_format = "text";
  compare->add_option("--input,-i", compare_in, "CSV written by 'metrics'")->required();
  compare->add_option("--format", compare_format, "csv, text or table");

  // prefs
  auto* prefs = app.add_subcommand("prefs", "Build preference pairs (spotlight chosen, summary rejected)");
  std::string prefs_in, template_path, prefs_out = "-", sft_out;
  prefs->add_option("--input,-i", prefs_in, "Record file (JSONL)")->required();
  prefs->add_option("--template-file", template_path, "Prompt template with a {document} placeholder");
  prefs->add_option("--out,-o", prefs_out, "Preference pairs (JSONL); the second half when --sft-out is given");
  prefs->add_option("--sft-out", sft_out, "Split by --seed and write the first half here as records");

  // dpo-eval
  auto* dpo = app.add_subcommand("dpo-eval", "Evaluate the DPO objective from recorded log-probabilities");
  std::string logprob_path;
  std::optional<double> beta;
  bool per_record = false;
  dpo->add_option("--logprobs", logprob_path, "Log-probability file (JSONL)")->required();
  dpo->add_option("--beta", beta, "Reward scale (default 0.01)");
  dpo->add_flag("--per-record", per_record, "Also print one line per pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    Config cfg = g.resolve();

    if (*ingest) {
      const auto records = read_corpus(ingest_in, !lenient);
      Output out(ingest_out);
      write_corpus(out.stream(), records);
      out.close(ingest_out);
      if (!idf_dir.empty()) {
        for (const auto& [tag, table] : build_idf_by_tag(records)) table.save(idf_dir + "/" + tag + ".idf");
      }
      std::cerr << "ingested " << records.size() << " record(s)\n";
    } else if (*filter) {
      if (special_threshold) cfg.set("special_char_threshold", std::to_string(*special_threshold));
      const auto records = read_corpus(filter_in, true);
      auto [kept, report] = filter_records(records, cfg.filter);
      Output out(filter_out);
      write_corpus(out.stream(), kept);
      out.close(filter_out);
      if (!filter_report.empty()) {
        Output rep(filter_report);
        write_filter_report(rep.stream(), report);
        rep.close(filter_report);
      } else {
        write_filter_report(std::cerr, report);
      }
    } else if (*metrics) {
      const auto fmt = parse_report_format(format);
      const auto records = read_corpus(metrics_in, true);
      Assets assets;
      assets.familiar_words = load_word_list(
          familiar_path.empty() ? std::string(SPOTLIGHT_DEFAULT_ASSETS) + "/familiar_words.txt" : familiar_path);
      if (!abbrev_path.empty()) assets.abbreviations = load_word_list(abbrev_path);

      std::optional<FactSets> facts;
      if (!facts_path.empty()) facts = load_facts(facts_path);
      std::optional<VerdictTable> verdicts;
      if (!verdicts_path.empty()) verdicts = VerdictTable::load(verdicts_path);

      CharacterizeOptions opts;
      opts.metrics = cfg.metrics;
      opts.threads = cfg.threads;
      opts.facts = facts ? &*facts : nullptr;
      if (verdicts) opts.oracle = verdicts->oracle();

      const auto rows = characterize_corpus(records, assets, opts);
      const auto comparisons = no_compare ? std::vector<ComparisonVerdict>{} : compare_all(rows);
      Output out(metrics_out);
      emit_report(out.stream(), rows, comparisons, fmt);
      out.close(metrics_out);
    } else if (*compare) {
      const auto fmt = parse_report_format(compare_format);
      std::ifstream in(compare_in, std::ios::binary);
      if (!in) throw InputError("cannot open " + compare_in);
      const auto rows = parse_feature_csv(in);
      if (rows.empty()) throw InputError(compare_in + ": no feature rows");
      emit_report(std::cout, rows, compare_all(rows), fmt);
    } else if (*prefs) {
      const auto tmpl = template_path.empty() ? PromptTemplate{} : PromptTemplate::from_file(template_path);
      const auto records = read_corpus(prefs_in, true);
      std::vector<CorpusRecord> dpo_part = records;
      if (!sft_out.empty()) {
        auto [sft, rest] = split_two_stage(records, cfg.seed);
        Output s(sft_out);
        write_corpus(s.stream(), sft);
        s.close(sft_out);
        dpo_part = std::move(rest);
      }
      const auto pairs = build_preference_dataset(dpo_part, tmpl);
      Output out(prefs_out);
      write_pairs(out.stream(), pairs);
      out.close(prefs_out);
    } else if (*dpo) {
      const double b = beta.value_or(cfg.beta);
      if (!(b > 0.0)) throw ConfigError("--beta must be positive");
      const auto recs = load_logprobs(logprob_path);
      if (recs.empty()) throw InputError(logprob_path + ": no records");
      if (per_record) {
        for (const auto& r : recs) {
          const auto res = dpo_loss(r, b);
          std::printf("%s loss=%.9f margin=%.9f chosen_reward=%.9f rejected_reward=%.9f\n", r.pair_id.c_str(),
                      res.loss, res.margin, res.chosen_reward, res.rejected_reward);
        }
      }
      const auto batch = batch_dpo_loss(recs, b);
      std::printf("count=%zu\nbeta=%g\nmean_loss=%.9f\nmean_margin=%.9f\naccuracy=%.6f\n", batch.count, b,
                  batch.mean_loss, batch.mean_margin, batch.accuracy);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const OracleError& e) {
    std::cerr << "oracle error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
