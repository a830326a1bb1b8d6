#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/kg/graph_io.hpp"
#include "wkg/kg/value.hpp"

namespace wkg::query {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<kg::Value>> rows;

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    return columns.size();
  }
  bool has_column(const std::string& name) const { return column_index(name) < columns.size(); }
  const kg::Value& at(std::size_t row, const std::string& column) const {
    return rows.at(row).at(column_index(column));
  }
  bool operator==(const ResultTable&) const = default;
};

inline nlohmann::json to_json(const ResultTable& t, const Clock& clock = Clock()) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    auto row = nlohmann::json::array();
    for (const auto& v : r) row.push_back(kg::value_to_json(v, clock));
    rows.push_back(std::move(row));
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

inline ResultTable table_from_json(const nlohmann::json& j, const Clock& clock = Clock()) {
  ResultTable t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<kg::Value> row;
    for (const auto& v : r) row.push_back(kg::value_from_json(v, clock));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Plain-text grid for terminals.
inline std::string render_table(const ResultTable& t, std::size_t max_rows = 50) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  for (std::size_t r = 0; r < t.rows.size() && r < max_rows; ++r) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      line.push_back(kg::to_display(t.rows[r][c]));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string out;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += " | ";
      out += line[c] + std::string(width[c] - line[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = emit(t.columns);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) rule += (c ? "-+-" : "") + std::string(width[c], '-');
  out += rule + "\n";
  for (const auto& line : cells) out += emit(line);
  if (t.rows.size() > max_rows)
    out += "... " + std::to_string(t.rows.size() - max_rows) + " more rows\n";
  return out;
}

}  // namespace wkg::query
