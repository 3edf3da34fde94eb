#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hscale/errors.hpp"

namespace hscale {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

/// Result table with a named column set fixed at creation.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table() = default;
  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ShapeError("Table: row width does not match column count");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw ShapeError("Table: no column named '" + name + "'");
  }

  double number(std::size_t row, const std::string& name) const {
    const Cell& c = rows.at(row).at(column(name));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw ShapeError("Table: cell in column '" + name + "' is not numeric");
  }
};

}  // namespace hscale
