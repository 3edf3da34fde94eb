#pragma once

// Table serialization. CSV follows RFC 4180 (CRLF-free: rows end in '\n'),
// floats are printed with %.17g so every double round-trips exactly.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hscale/errors.hpp"
#include "hscale/table.hpp"

namespace hscale::experiments {

enum class Format { csv, json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("unknown format '" + std::string(s) + "'; valid formats: csv json");
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

/// RFC 4180 reader; returns the header as row 0.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, in_field = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty()) throw DomainError("parse_csv: quote inside an unquoted field");
        quoted = in_field = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        in_field = true;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        in_field = false;
        break;
      default:
        field += ch;
        in_field = true;
    }
  }
  if (quoted) throw DomainError("parse_csv: unterminated quoted field");
  if (in_field || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

/// {"columns": [...], "rows": [[...], ...]}
inline nlohmann::ordered_json table_json(const Table& t) {
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

/// out.csv + "summary" -> out.summary.csv
inline std::string sibling_path(const std::string& path, const std::string& name) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + name;
  return path.substr(0, dot) + "." + name + path.substr(dot);
}

}  // namespace hscale::experiments
