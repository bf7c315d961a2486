#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qrf {

/// Format a double with 12 significant digits, deterministically.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

/// A flat results table: metadata block, named columns, preformatted string
/// cells, optional footer entries. Rows are emitted in insertion order.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> footers;

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void meta(std::string key, double value) { metadata.emplace_back(std::move(key), format_double(value)); }
  void footer(std::string key, std::string value) { footers.emplace_back(std::move(key), std::move(value)); }
  void footer(std::string key, double value) { footers.emplace_back(std::move(key), format_double(value)); }

  std::vector<std::string>& new_row() {
    rows.emplace_back();
    return rows.back();
  }
};

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// RFC-4180 body with '#'-prefixed metadata/footer comment lines around it.
inline void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << detail::csv_quote(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_quote(row[i]);
    os << "\n";
  }
  for (const auto& [k, v] : t.footers) os << "# " << k << "=" << v << "\n";
}

inline void write_json(std::ostream& os, const Table& t) {
  os << "{\n  \"metadata\": {";
  for (std::size_t i = 0; i < t.metadata.size(); ++i)
    os << (i ? ", " : "") << "\"" << detail::json_escape(t.metadata[i].first) << "\": \""
       << detail::json_escape(t.metadata[i].second) << "\"";
  os << "},\n  \"columns\": [";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? ", " : "") << "\"" << detail::json_escape(t.columns[i]) << "\"";
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n    " : "\n    ") << "[";
    for (std::size_t i = 0; i < t.rows[r].size(); ++i)
      os << (i ? ", " : "") << "\"" << detail::json_escape(t.rows[r][i]) << "\"";
    os << "]";
  }
  os << "\n  ],\n  \"footers\": {";
  for (std::size_t i = 0; i < t.footers.size(); ++i)
    os << (i ? ", " : "") << "\"" << detail::json_escape(t.footers[i].first) << "\": \""
       << detail::json_escape(t.footers[i].second) << "\"";
  os << "}\n}\n";
}

}  // namespace qrf
