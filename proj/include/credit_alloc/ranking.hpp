#pragma once

// Journal ranking tables: CSV/JSON ingestion and (field, journal) lookup.
//
// CSV header is fixed: field,journal,rank,total,impact_factor
// JSON is an array of objects with those same five keys.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "credit.hpp"

namespace credit_alloc {

enum class TableFormat { Csv, Json };

/// Malformed input, duplicate key or inconsistent field total.
class RankingParseError : public std::runtime_error {
 public:
  RankingParseError(std::size_t record, const std::string& what)
      : std::runtime_error(record == 0 ? what
                                       : "record " + std::to_string(record) + ": " + what),
        record_(record) {}

  /// 1-based line (CSV) or array element (JSON); 0 when not tied to one.
  std::size_t record() const noexcept { return record_; }

 private:
  std::size_t record_;
};

class JournalNotFound : public std::runtime_error {
 public:
  JournalNotFound(std::string field, std::string journal, std::vector<std::string> candidates)
      : std::runtime_error(make_message(field, journal, candidates)),
        candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  static std::string make_message(const std::string& field, const std::string& journal,
                                  const std::vector<std::string>& candidates) {
    std::string msg = "journal not found in field: '" + journal + "' in '" + field + "'";
    if (!candidates.empty()) {
      msg += "; did you mean:";
      for (const auto& c : candidates) msg += " '" + c + "'";
    }
    return msg;
  }

  std::vector<std::string> candidates_;
};

struct RankingEntry {
  std::string field;
  std::string journal;
  std::int64_t rank;
  std::int64_t total;
  double impact_factor;  // display only

  friend bool operator==(const RankingEntry&, const RankingEntry&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// ASCII-only folding; non-ASCII bytes compare verbatim.
inline std::string fold_case(std::string_view s) {
  std::string out(trim(s));
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong, surrogate, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

inline std::optional<std::int64_t> parse_count(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// from_chars is locale-independent: '.' is the only decimal separator.
inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// RFC 4180 quoting within a single line; nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty() && !was_quoted) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  cells.push_back(std::move(cur));
  return cells;
}

inline std::string quote_csv(std::string_view s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!s.empty() && (trim(s).size() != s.size()));
  if (!needs) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Validated, immutable set of ranking rows. Lookups ignore case and
/// surrounding whitespace.
class RankingTable {
 public:
  RankingTable() = default;

  /// `records` gives the 1-based source position of each entry for error
  /// messages; pass an empty vector when there is none.
  explicit RankingTable(std::vector<RankingEntry> entries,
                        const std::vector<std::size_t>& records = {})
      : entries_(std::move(entries)) {
    std::unordered_map<std::string, std::int64_t> field_totals;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      const std::size_t rec = i < records.size() ? records[i] : 0;
      validate(e, rec);
      const auto key = make_key(e.field, e.journal);
      if (!index_.emplace(key, i).second) {
        throw RankingParseError(rec, "duplicate entry for field '" + e.field + "', journal '" +
                                         e.journal + "'");
      }
      auto [it, inserted] = field_totals.emplace(detail::fold_case(e.field), e.total);
      if (!inserted && it->second != e.total) {
        throw RankingParseError(rec, "inconsistent journal total within field '" + e.field +
                                         "': " + std::to_string(it->second) + " vs " +
                                         std::to_string(e.total));
      }
    }
  }

  const std::vector<RankingEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const RankingEntry* find(std::string_view field, std::string_view journal) const {
    auto it = index_.find(make_key(field, journal));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  /// Same-field journals whose names contain the query or are contained in
  /// it, case-insensitively.
  std::vector<std::string> near_misses(std::string_view field, std::string_view journal) const {
    const auto f = detail::fold_case(field);
    const auto j = detail::fold_case(journal);
    std::vector<std::string> out;
    if (j.empty()) return out;
    for (const auto& e : entries_) {
      if (detail::fold_case(e.field) != f) continue;
      const auto name = detail::fold_case(e.journal);
      if (name.find(j) != std::string::npos || j.find(name) != std::string::npos) {
        out.push_back(e.journal);
      }
    }
    return out;
  }

 private:
  static std::string make_key(std::string_view field, std::string_view journal) {
    return detail::fold_case(field) + '\x1f' + detail::fold_case(journal);
  }

  static void validate(const RankingEntry& e, std::size_t rec) {
    if (detail::trim(e.field).empty()) throw RankingParseError(rec, "empty field name");
    if (detail::trim(e.journal).empty()) throw RankingParseError(rec, "empty journal name");
    if (e.total < 1) throw RankingParseError(rec, "total must be a positive integer");
    if (e.rank < 1 || e.rank > e.total) {
      throw RankingParseError(rec, "rank must lie in [1, total]");
    }
    if (!std::isfinite(e.impact_factor) || e.impact_factor < 0.0) {
      throw RankingParseError(rec, "impact factor must be a non-negative number");
    }
  }

  std::vector<RankingEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline constexpr std::string_view kCsvHeader = "field,journal,rank,total,impact_factor";

inline RankingTable parse_csv(std::string_view text) {
  std::vector<RankingEntry> entries;
  std::vector<std::size_t> records;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    auto cells = split_csv_line(line);
    if (!cells) throw RankingParseError(line_no, "unterminated quoted cell");

    if (!header_seen) {
      std::vector<std::string> names;
      for (const auto& c : *cells) names.push_back(fold_case(c));
      std::string joined;
      for (std::size_t i = 0; i < names.size(); ++i) joined += (i ? "," : "") + names[i];
      if (joined != kCsvHeader) {
        throw RankingParseError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    if (cells->size() != 5) {
      throw RankingParseError(line_no, "expected 5 columns, found " +
                                           std::to_string(cells->size()));
    }
    const auto rank = parse_count((*cells)[2]);
    if (!rank) throw RankingParseError(line_no, "rank is not an integer");
    const auto total = parse_count((*cells)[3]);
    if (!total) throw RankingParseError(line_no, "total is not an integer");
    const auto impact = parse_real((*cells)[4]);
    if (!impact) throw RankingParseError(line_no, "impact factor is not a number");

    entries.push_back(RankingEntry{std::string(trim((*cells)[0])),
                                   std::string(trim((*cells)[1])), *rank, *total, *impact});
    records.push_back(line_no);
  }
  return RankingTable(std::move(entries), records);
}

inline RankingTable parse_json(std::string_view text) {
  if (trim(text).empty()) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RankingParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RankingParseError(0, "expected a JSON array of entries");

  std::vector<RankingEntry> entries;
  std::vector<std::size_t> records;
  std::size_t rec = 0;
  for (const auto& item : doc) {
    ++rec;
    if (!item.is_object()) throw RankingParseError(rec, "entry is not an object");
    for (const auto& [key, _] : item.items()) {
      if (key != "field" && key != "journal" && key != "rank" && key != "total" &&
          key != "impact_factor") {
        throw RankingParseError(rec, "unexpected key '" + key + "'");
      }
    }
    auto text_of = [&](const char* key) {
      auto it = item.find(key);
      if (it == item.end() || !it->is_string()) {
        throw RankingParseError(rec, std::string("'") + key + "' must be a string");
      }
      return std::string(trim(it->get_ref<const std::string&>()));
    };
    auto count_of = [&](const char* key) {
      auto it = item.find(key);
      if (it == item.end() || !it->is_number_integer()) {
        throw RankingParseError(rec, std::string("'") + key + "' must be an integer");
      }
      return it->get<std::int64_t>();
    };
    auto impact = item.find("impact_factor");
    if (impact == item.end() || !impact->is_number()) {
      throw RankingParseError(rec, "'impact_factor' must be a number");
    }
    entries.push_back(RankingEntry{text_of("field"), text_of("journal"), count_of("rank"),
                                   count_of("total"), impact->get<double>()});
    records.push_back(rec);
  }
  return RankingTable(std::move(entries), records);
}

}  // namespace detail

inline RankingTable parse_ranking_table(std::string_view text, TableFormat format) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  if (!detail::valid_utf8(text)) throw RankingParseError(0, "input is not valid UTF-8");
  return format == TableFormat::Csv ? detail::parse_csv(text) : detail::parse_json(text);
}

inline RankingTable parse_ranking_table(std::istream& in, TableFormat format) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_ranking_table(std::string_view(text), format);
}

inline std::string serialize_ranking_table(const RankingTable& table, TableFormat format) {
  if (format == TableFormat::Json) {
    auto doc = nlohmann::json::array();
    for (const auto& e : table.entries()) {
      doc.push_back({{"field", e.field},
                     {"journal", e.journal},
                     {"rank", e.rank},
                     {"total", e.total},
                     {"impact_factor", e.impact_factor}});
    }
    return doc.dump(2) + "\n";
  }
  std::string out(detail::kCsvHeader);
  out += '\n';
  for (const auto& e : table.entries()) {
    out += detail::quote_csv(e.field) + ',' + detail::quote_csv(e.journal) + ',' +
           std::to_string(e.rank) + ',' + std::to_string(e.total) + ',' +
           detail::format_real(e.impact_factor) + '\n';
  }
  return out;
}

inline RankFraction rank_fraction(const RankingTable& table, std::string_view field,
                                  std::string_view journal) {
  if (const auto* e = table.find(field, journal)) {
    return RankFraction::from_rank(e->rank, e->total);
  }
  throw JournalNotFound(std::string(detail::trim(field)), std::string(detail::trim(journal)),
                        table.near_misses(field, journal));
}

}  // namespace credit_alloc
