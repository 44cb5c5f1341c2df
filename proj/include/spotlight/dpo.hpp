#pragma once

// Numeric evaluation of the direct preference optimization objective from
// per-token log-probabilities produced elsewhere. Nothing here runs a model.
//
//   r_w = beta * (log pi(y_w|x) - log ref(y_w|x))
//   r_l = beta * (log pi(y_l|x) - log ref(y_l|x))
//   loss = -log sigmoid(r_w - r_l) = softplus(-(r_w - r_l))

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spotlight/error.hpp"

namespace spotlight {

inline constexpr double kDefaultBeta = 0.01;

struct LogProbRecord {
  std::string pair_id;
  std::vector<double> policy_chosen;
  std::vector<double> policy_rejected;
  std::vector<double> ref_chosen;
  std::vector<double> ref_rejected;
};

struct DpoResult {
  double loss = 0.0;
  double chosen_reward = 0.0;
  double rejected_reward = 0.0;
  double margin = 0.0;
};

struct BatchDpoResult {
  double mean_loss = 0.0;
  double mean_margin = 0.0;
  double accuracy = 0.0;  // fraction of records with margin > 0
  std::size_t count = 0;
};

/// Pairwise (cascade) summation with a fixed association order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Sum of per-token conditional log-probabilities.
inline double sequence_logprob(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) throw DomainError("sequence_logprob: empty token list");
  for (double lp : token_logprobs) {
    if (!std::isfinite(lp)) throw DomainError("sequence_logprob: non-finite log-prob");
    if (lp > 0.0) throw DomainError("sequence_logprob: positive log-prob");
  }
  return pairwise_sum(token_logprobs);
}

/// log(1 + e^x) without overflow for large |x|.
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

/// -log sigmoid(m).
inline double neg_log_sigmoid(double m) { return softplus(-m); }

inline double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

inline void validate(const LogProbRecord& rec) {
  auto where = [&] { return rec.pair_id.empty() ? std::string("record") : "record '" + rec.pair_id + "'"; };
  if (rec.policy_chosen.size() != rec.ref_chosen.size())
    throw DomainError(where() + ": chosen policy/reference token counts differ");
  if (rec.policy_rejected.size() != rec.ref_rejected.size())
    throw DomainError(where() + ": rejected policy/reference token counts differ");
}

inline DpoResult dpo_loss(const LogProbRecord& rec, double beta = kDefaultBeta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("dpo_loss: beta must be positive");
  validate(rec);
  DpoResult r;
  r.chosen_reward = beta * (sequence_logprob(rec.policy_chosen) - sequence_logprob(rec.ref_chosen));
  r.rejected_reward =
      beta * (sequence_logprob(rec.policy_rejected) - sequence_logprob(rec.ref_rejected));
  r.margin = r.chosen_reward - r.rejected_reward;
  r.loss = neg_log_sigmoid(r.margin);
  return r;
}

inline BatchDpoResult batch_dpo_loss(std::span<const LogProbRecord> records,
                                     double beta = kDefaultBeta) {
  if (records.empty()) throw DomainError("batch_dpo_loss: empty batch");
  std::vector<double> losses;
  std::vector<double> margins;
  losses.reserve(records.size());
  margins.reserve(records.size());
  std::size_t wins = 0;
  for (const auto& rec : records) {
    const auto r = dpo_loss(rec, beta);
    losses.push_back(r.loss);
    margins.push_back(r.margin);
    if (r.margin > 0.0) ++wins;
  }
  const double n = static_cast<double>(records.size());
  BatchDpoResult b;
  b.count = records.size();
  b.mean_loss = pairwise_sum(losses) / n;
  b.mean_margin = pairwise_sum(margins) / n;
  b.accuracy = static_cast<double>(wins) / n;
  return b;
}

/// Reads line-delimited JSON objects with "pair_id" and the four arrays
/// "policy_chosen", "policy_rejected", "ref_chosen", "ref_rejected".
inline std::vector<LogProbRecord> load_logprobs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open log-prob file: " + path);
  std::vector<LogProbRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      LogProbRecord rec;
      rec.pair_id = j.at("pair_id").get<std::string>();
      rec.policy_chosen = j.at("policy_chosen").get<std::vector<double>>();
      rec.policy_rejected = j.at("policy_rejected").get<std::vector<double>>();
      rec.ref_chosen = j.at("ref_chosen").get<std::vector<double>>();
      rec.ref_rejected = j.at("ref_rejected").get<std::vector<double>>();
      validate(rec);
      for (const auto* v : {&rec.policy_chosen, &rec.policy_rejected, &rec.ref_chosen, &rec.ref_rejected})
        sequence_logprob(*v);
      out.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const DomainError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace spotlight
