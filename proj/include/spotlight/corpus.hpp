#pragma once

// Corpus data model, line-delimited record I/O, the three-step summary
// filter, preference-pair construction and the two-stage SFT/DPO split.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spotlight/error.hpp"
#include "spotlight/textseg.hpp"
#include "spotlight/utf8.hpp"

namespace spotlight {

enum class CondensationKind { Spotlight, Summary };

inline std::string_view to_string(CondensationKind k) {
  return k == CondensationKind::Spotlight ? "spotlight" : "summary";
}

namespace detail {

inline bool blank(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    const auto d = utf8::decode(s, i);
    if (!utf8::is_space(d.cp)) return false;
    i += d.length;
  }
  return true;
}

}  // namespace detail

struct Document {
  std::string id;
  std::optional<std::string> title;
  std::string text;
  std::optional<std::string> domain_tag;
};

class Condensation {
 public:
  Condensation(CondensationKind kind, std::string text) : kind_(kind), text_(std::move(text)) {
    if (detail::blank(text_)) throw DomainError(std::string(to_string(kind_)) + " text is empty");
  }

  CondensationKind kind() const { return kind_; }
  const std::string& text() const { return text_; }

 private:
  CondensationKind kind_;
  std::string text_;
};

struct CorpusRecord {
  Document document;
  Condensation spotlight;
  std::optional<Condensation> summary;

  const std::string& id() const { return document.id; }
  std::string dataset_tag() const { return document.domain_tag.value_or("default"); }
};

inline CorpusRecord make_record(std::string id, std::string document, std::string spotlight,
                                std::optional<std::string> summary = std::nullopt,
                                std::optional<std::string> domain_tag = std::nullopt,
                                std::optional<std::string> title = std::nullopt) {
  if (detail::blank(document)) throw DomainError("record '" + id + "': document text is empty");
  CorpusRecord rec{Document{std::move(id), std::move(title), std::move(document), std::move(domain_tag)},
                   Condensation(CondensationKind::Spotlight, std::move(spotlight)), std::nullopt};
  if (summary) rec.summary.emplace(CondensationKind::Summary, std::move(*summary));
  return rec;
}

// ---------------------------------------------------------------------------
// Record files: one JSON object per line with id, document, spotlight and the
// optional title, summary and domain_tag fields. Blank lines are ignored.

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::size_t skipped = 0;
};

namespace detail {

inline std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

inline CorpusRecord parse_record(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  if (!j.is_object()) throw DomainError("line is not a JSON object");
  for (const char* key : {"id", "document", "spotlight"})
    if (!j.contains(key)) throw DomainError(std::string("missing \"") + key + "\" field");
  return make_record(j.at("id").get<std::string>(), j.at("document").get<std::string>(),
                     j.at("spotlight").get<std::string>(), optional_string(j, "summary"),
                     optional_string(j, "domain_tag"), optional_string(j, "title"));
}

}  // namespace detail

inline LoadResult load_corpus(std::istream& in, bool strict, const std::string& name = "<stream>") {
  LoadResult result;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    std::optional<CorpusRecord> rec;
    try {
      rec.emplace(detail::parse_record(line));
    } catch (const std::exception& e) {
      if (strict) throw InputError(name + ":" + std::to_string(lineno) + ": " + e.what());
      ++result.skipped;
      continue;
    }
    if (!ids.insert(rec->id()).second)
      throw InputError(name + ":" + std::to_string(lineno) + ": duplicate id '" + rec->id() + "'");
    result.records.push_back(std::move(*rec));
  }
  return result;
}

inline LoadResult load_corpus(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file: " + path);
  return load_corpus(in, strict, path);
}

inline nlohmann::ordered_json to_json(const CorpusRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.document.id;
  if (rec.document.title) j["title"] = *rec.document.title;
  j["document"] = rec.document.text;
  j["spotlight"] = rec.spotlight.text();
  if (rec.summary) j["summary"] = rec.summary->text();
  if (rec.document.domain_tag) j["domain_tag"] = *rec.document.domain_tag;
  return j;
}

inline void write_corpus(std::ostream& out, std::span<const CorpusRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Filtering

struct FilterConfig {
  double special_char_threshold = 0.05;
  std::size_t hash_run_min = 1;  // a run of this many '#' drops the summary
};

struct FilterReport {
  std::size_t total = 0;
  std::size_t dropped_special_chars = 0;
  std::size_t dropped_incomplete = 0;
  std::size_t dropped_unfaithful_terms = 0;
  std::size_t kept = 0;

  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

enum class FilterVerdict { Kept, SpecialChars, Incomplete, UnfaithfulTerms };

namespace detail {

inline bool is_allowed_char(char32_t cp) {
  if (utf8::is_letter(cp) || utf8::is_digit(cp) || utf8::is_space(cp)) return true;
  switch (cp) {
    case '.': case ',': case ';': case ':': case '\'': case '"': case '?': case '!':
    case '-': case '(': case ')':
    case 0x2018: case 0x2019: case 0x201C: case 0x201D:  // curly quotes
    case 0x2013: case 0x2014:                            // en and em dash
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Share of code points outside letters, digits, whitespace and . , ; : ' " ? ! - ( ).
inline double special_char_ratio(std::string_view text) {
  std::size_t total = 0;
  std::size_t special = 0;
  for (std::size_t i = 0; i < text.size();) {
    const auto d = utf8::decode(text, i);
    ++total;
    if (!detail::is_allowed_char(d.cp)) ++special;
    i += d.length;
  }
  return total == 0 ? 0.0 : static_cast<double>(special) / static_cast<double>(total);
}

/// True for an HTML/XML-like tag such as <p>, </div> or <br/>.
inline bool contains_markup_tag(std::string_view text) {
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  for (std::size_t i = text.find('<'); i != std::string_view::npos; i = text.find('<', i + 1)) {
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '/') ++j;
    if (j >= text.size() || !is_alpha(text[j])) continue;
    const auto close = text.find_first_of("<>", j);
    if (close != std::string_view::npos && text[close] == '>') return true;
  }
  return false;
}

inline bool contains_hash_run(std::string_view text, std::size_t min_run) {
  std::size_t run = 0;
  for (char c : text) {
    run = c == '#' ? run + 1 : 0;
    if (run >= std::max<std::size_t>(min_run, 1)) return true;
  }
  return false;
}

/// The last non-whitespace character must be '.', '!' or '?', optionally
/// followed by closing quotes.
inline bool is_incomplete(std::string_view text) {
  std::vector<char32_t> cps;
  for (std::size_t i = 0; i < text.size();) {
    const auto d = utf8::decode(text, i);
    cps.push_back(d.cp);
    i += d.length;
  }
  while (!cps.empty() && utf8::is_space(cps.back())) cps.pop_back();
  auto is_quote = [](char32_t c) { return c == '"' || c == '\'' || c == 0x201D || c == 0x2019; };
  while (!cps.empty() && is_quote(cps.back())) cps.pop_back();
  if (cps.empty()) return true;
  const char32_t last = cps.back();
  return !(last == '.' || last == '!' || last == '?');
}

/// Digit runs, keeping internal decimal points and thousands separators.
/// Separators are removed from the returned strings.
inline std::vector<std::string> numeric_terms(std::string_view text) {
  std::vector<std::string> out;
  auto digit = [&](std::size_t i) { return i < text.size() && text[i] >= '0' && text[i] <= '9'; };
  for (std::size_t i = 0; i < text.size();) {
    if (!digit(i)) {
      ++i;
      continue;
    }
    std::string num;
    while (true) {
      while (digit(i)) num.push_back(text[i++]);
      if (i + 1 < text.size() && (text[i] == '.' || text[i] == ',') && digit(i + 1)) {
        if (text[i] == '.') num.push_back('.');
        ++i;
        continue;
      }
      break;
    }
    out.push_back(std::move(num));
  }
  return out;
}

namespace detail {

inline std::string strip_possessive(std::string w) {
  if (w.size() > 2 && w.ends_with("'s")) w.resize(w.size() - 2);
  return w;
}

inline std::size_t letter_count(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = utf8::decode(s, i);
    if (utf8::is_letter(d.cp)) ++n;
    i += d.length;
  }
  return n;
}

}  // namespace detail

/// Numbers and capitalized non-sentence-initial words of `summary` that do
/// not occur in `document` (case-insensitive token match).
inline std::vector<std::string> unfaithful_terms(std::string_view summary, std::string_view document,
                                                 const WordSet& abbreviations = default_abbreviations()) {
  std::unordered_set<std::string> doc_words;
  for (auto& t : tokenize_words(document)) {
    doc_words.insert(detail::strip_possessive(t));
    doc_words.insert(std::move(t));
  }
  std::unordered_set<std::string> doc_numbers;
  for (auto& n : numeric_terms(document)) doc_numbers.insert(std::move(n));

  std::vector<std::string> missing;
  for (auto& n : numeric_terms(summary))
    if (!doc_numbers.contains(n)) missing.push_back(std::move(n));

  for (const auto& span : split_sentences(summary, abbreviations)) {
    const auto tokens = tokenize_surface(span.text);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto& tok = tokens[t];
      if (!utf8::is_upper(utf8::decode(tok.surface, 0).cp)) continue;
      if (detail::letter_count(tok.surface) < 2) continue;
      const std::string term = detail::strip_possessive(tok.normalized);
      if (!doc_words.contains(term)) missing.push_back(tok.surface);
    }
  }
  return missing;
}

/// Applies the rules in order: special characters / markup, missing terminal
/// punctuation, terms or numbers absent from the document. Records without a
/// summary are kept.
inline FilterVerdict classify_record(const CorpusRecord& rec, const FilterConfig& cfg) {
  if (!rec.summary) return FilterVerdict::Kept;
  const std::string& s = rec.summary->text();
  if (special_char_ratio(s) > cfg.special_char_threshold || contains_markup_tag(s) ||
      contains_hash_run(s, cfg.hash_run_min))
    return FilterVerdict::SpecialChars;
  if (is_incomplete(s)) return FilterVerdict::Incomplete;
  if (!unfaithful_terms(s, rec.document.text).empty()) return FilterVerdict::UnfaithfulTerms;
  return FilterVerdict::Kept;
}

inline std::pair<std::vector<CorpusRecord>, FilterReport> filter_records(
    std::span<const CorpusRecord> records, const FilterConfig& cfg = {}) {
  std::vector<CorpusRecord> kept;
  FilterReport report;
  report.total = records.size();
  for (const auto& rec : records) {
    switch (classify_record(rec, cfg)) {
      case FilterVerdict::Kept: kept.push_back(rec); break;
      case FilterVerdict::SpecialChars: ++report.dropped_special_chars; break;
      case FilterVerdict::Incomplete: ++report.dropped_incomplete; break;
      case FilterVerdict::UnfaithfulTerms: ++report.dropped_unfaithful_terms; break;
    }
  }
  report.kept = kept.size();
  return {std::move(kept), report};
}

inline void write_filter_report(std::ostream& out, const FilterReport& r) {
  out << "total=" << r.total << '\n'
      << "dropped_special_chars=" << r.dropped_special_chars << '\n'
      << "dropped_incomplete=" << r.dropped_incomplete << '\n'
      << "dropped_unfaithful_terms=" << r.dropped_unfaithful_terms << '\n'
      << "kept=" << r.kept << '\n';
}

// ---------------------------------------------------------------------------
// Preference pairs

/// Prompt text with {document}, {title}, {domain} and {id} placeholders.
class PromptTemplate {
 public:
  static constexpr std::string_view kDefault =
      "### Instruction:\n"
      "Write a short spotlight for the document below. Do not cover every detail; "
      "highlight the points that make a reader want to read the whole document.\n"
      "### Document: {document}\n"
      "### Response:\n";

  PromptTemplate() : text_(kDefault) {}

  explicit PromptTemplate(std::string text) : text_(std::move(text)) {
    if (text_.find("{document}") == std::string::npos)
      throw ConfigError("prompt template has no {document} placeholder");
  }

  static PromptTemplate from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open template file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return PromptTemplate(ss.str());
  }

  std::string render(const Document& doc) const {
    std::string out;
    out.reserve(text_.size() + doc.text.size());
    for (std::size_t i = 0; i < text_.size();) {
      if (text_[i] == '{') {
        const auto close = text_.find('}', i);
        if (close != std::string::npos) {
          const std::string_view key(text_.data() + i + 1, close - i - 1);
          const std::string* value = nullptr;
          std::string tmp;
          if (key == "document") {
            value = &doc.text;
          } else if (key == "title") {
            tmp = doc.title.value_or("");
            value = &tmp;
          } else if (key == "domain") {
            tmp = doc.domain_tag.value_or("");
            value = &tmp;
          } else if (key == "id") {
            value = &doc.id;
          }
          if (value) {
            out += *value;
            i = close + 1;
            continue;
          }
        }
      }
      out.push_back(text_[i++]);
    }
    return out;
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct PreferencePair {
  std::string prompt;
  std::string chosen;
  std::string rejected;
  std::string record_id;
};

/// One pair per record: spotlight chosen, summary rejected.
inline std::vector<PreferencePair> build_preference_dataset(std::span<const CorpusRecord> records,
                                                            const PromptTemplate& tmpl = {}) {
  std::vector<PreferencePair> pairs;
  pairs.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.summary)
      throw DomainError("build_preference_dataset: record '" + rec.id() + "' has no summary");
    pairs.push_back({tmpl.render(rec.document), rec.spotlight.text(), rec.summary->text(), rec.id()});
  }
  return pairs;
}

inline void write_pairs(std::ostream& out, std::span<const PreferencePair> pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["record_id"] = p.record_id;
    j["prompt"] = p.prompt;
    j["chosen"] = p.chosen;
    j["rejected"] = p.rejected;
    out << j.dump() << '\n';
  }
}

namespace detail {

// Uniform draw in [0, bound) by rejection; independent of the standard
// library's distribution implementation so splits are portable.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Seeded random halves; the first half takes the extra record when the
/// count is odd. Records keep their input order within each half.
inline std::pair<std::vector<CorpusRecord>, std::vector<CorpusRecord>> split_two_stage(
    std::span<const CorpusRecord> records, std::uint64_t seed) {
  if (records.size() < 2) throw DomainError("split_two_stage: need at least 2 records");
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[detail::bounded(rng, i + 1)]);

  const std::size_t first_size = (records.size() + 1) / 2;
  // each half keeps input order
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first_size));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(first_size), order.end());
  std::pair<std::vector<CorpusRecord>, std::vector<CorpusRecord>> halves;
  halves.first.reserve(first_size);
  halves.second.reserve(records.size() - first_size);
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < first_size ? halves.first : halves.second).push_back(records[order[i]]);
  return halves;
}

}  // namespace spotlight
