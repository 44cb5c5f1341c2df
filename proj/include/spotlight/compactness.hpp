#pragma once

// Document-frequency table over a document population and the average-IDF
// compactness of a condensation measured against it.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spotlight/error.hpp"

namespace spotlight {

/// idf(t) = ln(N / df(t)); an unseen token uses df = 0.5.
class IdfTable {
 public:
  IdfTable() = default;

  /// Each element is the token list of one document.
  static IdfTable build(std::span<const std::vector<std::string>> documents) {
    if (documents.empty()) throw DomainError("build_idf: empty corpus");
    IdfTable table;
    table.doc_count_ = documents.size();
    std::unordered_set<std::string_view> seen;
    for (const auto& doc : documents) {
      seen.clear();
      for (const auto& tok : doc)
        if (seen.insert(tok).second) ++table.df_[tok];
    }
    return table;
  }

  std::size_t doc_count() const { return doc_count_; }

  std::size_t df(const std::string& token) const {
    auto it = df_.find(token);
    return it == df_.end() ? 0 : it->second;
  }

  double idf(const std::string& token) const {
    const std::size_t d = df(token);
    const double denom = d == 0 ? 0.5 : static_cast<double>(d);
    return std::log(static_cast<double>(doc_count_) / denom);
  }

  std::size_t vocabulary_size() const { return df_.size(); }

  /// Text form: "N\t<doc_count>" then one "token\tdf" line per token,
  /// tokens in byte order.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write IDF table: " + path);
    out << "N\t" << doc_count_ << '\n';
    std::map<std::string_view, std::size_t> sorted(df_.begin(), df_.end());
    for (const auto& [tok, d] : sorted) out << tok << '\t' << d << '\n';
    if (!out) throw InputError("write failed: " + path);
  }

  static IdfTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open IDF table: " + path);
    IdfTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("N\t", 0) != 0)
      throw InputError(path + ": missing 'N<TAB>count' header");
    table.doc_count_ = parse_count(line.substr(2), path, 1);
    if (table.doc_count_ == 0) throw InputError(path + ": N must be positive");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos || tab == 0)
        throw InputError(path + ":" + std::to_string(lineno) + ": expected token<TAB>df");
      const std::size_t d = parse_count(line.substr(tab + 1), path, lineno);
      if (d == 0 || d > table.doc_count_)
        throw InputError(path + ":" + std::to_string(lineno) + ": df out of range");
      table.df_[line.substr(0, tab)] = d;
    }
    return table;
  }

  friend bool operator==(const IdfTable&, const IdfTable&) = default;

 private:
  static std::size_t parse_count(const std::string& s, const std::string& path,
                                 std::size_t lineno) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw InputError(path + ":" + std::to_string(lineno) + ": bad count '" + s + "'");
    }
  }

  std::size_t doc_count_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

/// Mean IDF over every token occurrence of the condensation.
inline double avg_idf(std::span<const std::string> condensation_tokens, const IdfTable& table) {
  if (condensation_tokens.empty()) throw DomainError("avg_idf: condensation has no tokens");
  double sum = 0.0;
  for (const auto& t : condensation_tokens) sum += table.idf(t);
  return sum / static_cast<double>(condensation_tokens.size());
}

}  // namespace spotlight
