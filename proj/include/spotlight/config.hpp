#pragma once

// Tunable thresholds and variants, loadable from a flat key=value file.
// Lines starting with '#' are comments. Unknown keys are errors.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "spotlight/alignment.hpp"
#include "spotlight/corpus.hpp"
#include "spotlight/dpo.hpp"
#include "spotlight/error.hpp"
#include "spotlight/rouge.hpp"

namespace spotlight {

enum class EntropyMode { PerDocument, Pooled };

struct MetricConfig {
  RougeVariant match_variant = RougeVariant::R1;   // sentence-to-quartile matching
  RougeVariant report_variant = RougeVariant::R1;  // informativeness and extraction
  RougeOptions rouge;
  double informativeness_threshold = 0.3;
  Comparator informativeness_comparator = Comparator::AtLeast;
  double extraction_threshold = 0.8;
  Comparator extraction_comparator = Comparator::Greater;
  double skew_k = 0.5;
  EntropyMode entropy_mode = EntropyMode::PerDocument;
  bool drop_unmatched = true;  // condensation sentences with zero overlap carry no position
  std::size_t forcast_sample_words = 150;
  bool oracle_serialized = false;
};

struct Config {
  MetricConfig metrics;
  FilterConfig filter;
  double beta = kDefaultBeta;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void set(std::string_view key, std::string_view value);
  static Config load(const std::string& path);
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": not a number: '" + std::string(v) + "'");
  return out;
}

inline std::uint64_t parse_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": not a non-negative integer: '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key) + ": not a boolean: '" + std::string(v) + "'");
}

inline double parse_ratio(std::string_view key, std::string_view v) {
  const double x = parse_double(key, v);
  if (!(x > 0.0 && x <= 1.0)) throw ConfigError(std::string(key) + ": must be in (0, 1]");
  return x;
}

}  // namespace detail

inline RougeVariant parse_variant(std::string_view v) {
  if (v == "r1" || v == "R1") return RougeVariant::R1;
  if (v == "r2" || v == "R2") return RougeVariant::R2;
  if (v == "rl" || v == "RL") return RougeVariant::RL;
  throw ConfigError("unknown ROUGE variant '" + std::string(v) + "' (use r1, r2 or rl)");
}

inline Comparator parse_comparator(std::string_view v) {
  if (v == "ge" || v == ">=") return Comparator::AtLeast;
  if (v == "gt" || v == ">") return Comparator::Greater;
  throw ConfigError("unknown comparator '" + std::string(v) + "' (use ge or gt)");
}

inline void Config::set(std::string_view key, std::string_view value) {
  auto& m = metrics;
  if (key == "match_variant") {
    m.match_variant = parse_variant(value);
  } else if (key == "report_variant") {
    m.report_variant = parse_variant(value);
  } else if (key == "rouge_stem") {
    m.rouge.stem = detail::parse_bool(key, value);
  } else if (key == "rouge_remove_stopwords") {
    m.rouge.remove_stopwords = detail::parse_bool(key, value);
  } else if (key == "informativeness_threshold") {
    m.informativeness_threshold = detail::parse_ratio(key, value);
  } else if (key == "informativeness_comparator") {
    m.informativeness_comparator = parse_comparator(value);
  } else if (key == "extraction_threshold") {
    m.extraction_threshold = detail::parse_ratio(key, value);
  } else if (key == "extraction_comparator") {
    m.extraction_comparator = parse_comparator(value);
  } else if (key == "skew_k") {
    m.skew_k = detail::parse_ratio(key, value);
  } else if (key == "entropy_mode") {
    if (value == "per_document") {
      m.entropy_mode = EntropyMode::PerDocument;
    } else if (value == "pooled") {
      m.entropy_mode = EntropyMode::Pooled;
    } else {
      throw ConfigError("entropy_mode: use per_document or pooled");
    }
  } else if (key == "drop_unmatched") {
    m.drop_unmatched = detail::parse_bool(key, value);
  } else if (key == "forcast_sample_words") {
    m.forcast_sample_words = detail::parse_unsigned(key, value);
    if (m.forcast_sample_words == 0) throw ConfigError("forcast_sample_words must be positive");
  } else if (key == "oracle_serialized") {
    m.oracle_serialized = detail::parse_bool(key, value);
  } else if (key == "special_char_threshold") {
    filter.special_char_threshold = detail::parse_double(key, value);
    if (!(filter.special_char_threshold >= 0.0 && filter.special_char_threshold <= 1.0))
      throw ConfigError("special_char_threshold must be in [0, 1]");
  } else if (key == "hash_run_min") {
    filter.hash_run_min = detail::parse_unsigned(key, value);
    if (filter.hash_run_min == 0) throw ConfigError("hash_run_min must be positive");
  } else if (key == "beta") {
    beta = detail::parse_double(key, value);
    if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  } else if (key == "seed") {
    seed = detail::parse_unsigned(key, value);
  } else if (key == "threads") {
    threads = detail::parse_unsigned(key, value);
    if (threads == 0) throw ConfigError("threads must be positive");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

inline Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    try {
      cfg.set(detail::trim(std::string_view(t).substr(0, eq)),
              detail::trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace spotlight
