#pragma once

// Fact files and replayable entailment verdicts.
//
// Fact file: one JSON object per line,
//   {"record_id": "...", "text": "...", "source": "document"}
// where source is "document" (a key fact of the source document, default),
// "spotlight" or "summary" (a fact stated by that condensation).
//
// Verdict file: one JSON object per line,
//   {"record_id": "...", "kind": "spotlight", "fact_index": 0, "supported": true}
// fact_index counts the condensation facts of that record and kind in file order.

#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "spotlight/alignment.hpp"
#include "spotlight/error.hpp"

namespace spotlight {

struct RecordFacts {
  std::vector<KeyFact> document;
  std::vector<KeyFact> spotlight;
  std::vector<KeyFact> summary;
};

using FactSets = std::unordered_map<std::string, RecordFacts>;

inline FactSets load_facts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open fact file: " + path);
  FactSets sets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("record_id").get<std::string>();
      const auto source = j.value("source", std::string("document"));
      auto fact = KeyFact::from_text(j.at("text").get<std::string>());
      auto& rf = sets[id];
      if (source == "document") {
        rf.document.push_back(std::move(fact));
      } else if (source == "spotlight") {
        rf.spotlight.push_back(std::move(fact));
      } else if (source == "summary") {
        rf.summary.push_back(std::move(fact));
      } else {
        throw InputError(where + ": unknown source '" + source + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    } catch (const DomainError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return sets;
}

/// Entailment verdicts recorded by an external system, replayed exactly.
class VerdictTable {
 public:
  static VerdictTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open verdict file: " + path);
    VerdictTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path + ":" + std::to_string(lineno);
      try {
        const auto j = nlohmann::json::parse(line);
        const auto kind = j.at("kind").get<std::string>();
        if (kind != "spotlight" && kind != "summary")
          throw InputError(where + ": kind must be spotlight or summary");
        table.add(j.at("record_id").get<std::string>(), kind, j.at("fact_index").get<std::size_t>(),
                  j.at("supported").get<bool>());
      } catch (const nlohmann::json::exception& e) {
        throw InputError(where + ": " + e.what());
      }
    }
    return table;
  }

  void add(std::string record_id, std::string kind, std::size_t fact_index, bool supported) {
    verdicts_[{std::move(record_id), std::move(kind), fact_index}] = supported;
  }

  std::size_t size() const { return verdicts_.size(); }

  /// Oracle view; a missing verdict raises OracleError. The table must
  /// outlive the returned oracle.
  EntailmentOracle oracle() const {
    return [this](const FactQuery& q) {
      auto it = verdicts_.find({std::string(q.record_id), std::string(q.kind), q.fact_index});
      if (it == verdicts_.end())
        throw OracleError("no verdict for record '" + std::string(q.record_id) + "' " +
                          std::string(q.kind) + " fact " + std::to_string(q.fact_index));
      return it->second;
    };
  }

 private:
  std::map<std::tuple<std::string, std::string, std::size_t>, bool> verdicts_;
};

}  // namespace spotlight
