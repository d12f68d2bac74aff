#pragma once
// table.hpp: column-ordered result tables with deterministic CSV and JSON
// rendering. Numeric cells print with "%.12g" so identical runs produce
// byte-identical artifacts.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nrsense {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::vector<Cell>& add_row() {
    rows.emplace_back(columns.size());
    return rows.back();
  }

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("Table: unknown column " + name);
  }

  void set(std::vector<Cell>& row, const std::string& name, Cell value) const {
    row.at(static_cast<std::size_t>(column_index(name))) = std::move(value);
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string cell_text(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json doc;
  doc["columns"] = t.columns;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& name = t.columns[i];
      if (std::holds_alternative<std::monostate>(row[i]))
        obj[name] = nullptr;
      else if (const auto* d = std::get_if<double>(&row[i]))
        obj[name] = *d;
      else if (const auto* v = std::get_if<std::int64_t>(&row[i]))
        obj[name] = *v;
      else
        obj[name] = std::get<std::string>(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return doc;
}

}  // namespace nrsense
