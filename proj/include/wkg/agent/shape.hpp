#pragma once
// Answer shapes turn a result table into the JSON answer for one plan step.
//
//   record:c1,c2          single row -> {"c1": .., "c2": ..}; no rows -> nulls
//   map:key:v             {row[key]: row[v]}
//   map:key:v1,v2         {row[key]: {"v1": .., "v2": ..}}
//   rows:name:c1,c2       {"name": [{"c1": .., "c2": ..}, ...]}

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/query/result.hpp"

namespace wkg::agent {

struct AnswerShape {
  enum class Kind { Record, Map, Rows } kind = Kind::Record;
  std::string name;  // map key column or rows field name
  std::vector<std::string> columns;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline AnswerShape parse_shape(const std::string& spec) {
  auto parts = detail::split(spec, ':');
  auto bad = [&] { return Error(ErrorCode::InvalidArgument, "answer shape '" + spec + "'"); };
  AnswerShape s;
  if (parts[0] == "record" && parts.size() == 2) {
    s.kind = AnswerShape::Kind::Record;
    s.columns = detail::split(parts[1], ',');
  } else if ((parts[0] == "map" || parts[0] == "rows") && parts.size() == 3) {
    s.kind = parts[0] == "map" ? AnswerShape::Kind::Map : AnswerShape::Kind::Rows;
    s.name = parts[1];
    s.columns = detail::split(parts[2], ',');
  } else {
    throw bad();
  }
  for (const auto& c : s.columns)
    if (c.empty()) throw bad();
  if (s.name.empty() && s.kind != AnswerShape::Kind::Record) throw bad();
  return s;
}

inline nlohmann::json value_json(const kg::Value& v) {
  using K = kg::Value::Kind;
  switch (v.kind()) {
    case K::Null: return nullptr;
    case K::Bool: return v.as_bool();
    case K::Int: return v.as_int();
    case K::Float: return std::isfinite(v.as_float()) ? nlohmann::json(v.as_float()) : nlohmann::json(nullptr);
    case K::Text: return v.as_text();
    case K::DateTime: return v.as_datetime().seconds;
    case K::List: {
      auto a = nlohmann::json::array();
      for (const auto& x : v.as_list()) a.push_back(value_json(x));
      return a;
    }
    default: return kg::to_display(v);
  }
}

// Throws MALFORMED_REPLY when the table does not carry the promised columns.
inline nlohmann::json shape_values(const AnswerShape& shape, const query::ResultTable& t) {
  auto need = [&](const std::string& c) {
    auto i = t.column_index(c);
    if (i == t.columns.size())
      throw Error(ErrorCode::MalformedReply, "result has no column '" + c + "'");
    return i;
  };
  std::vector<std::size_t> idx;
  for (const auto& c : shape.columns) idx.push_back(need(c));
  auto record = [&](const std::vector<kg::Value>& row) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < idx.size(); ++i) o[shape.columns[i]] = value_json(row[idx[i]]);
    return o;
  };

  switch (shape.kind) {
    case AnswerShape::Kind::Record: {
      if (t.rows.size() > 1)
        throw Error(ErrorCode::MalformedReply,
                    "expected at most one row, got " + std::to_string(t.rows.size()));
      if (t.rows.empty()) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& c : shape.columns) o[c] = nullptr;
        return o;
      }
      return record(t.rows.front());
    }
    case AnswerShape::Kind::Map: {
      const auto key = need(shape.name);
      nlohmann::json o = nlohmann::json::object();
      for (const auto& row : t.rows) {
        if (row[key].is_null()) continue;
        const auto k = kg::to_display(row[key]);
        o[k] = idx.size() == 1 ? value_json(row[idx[0]]) : record(row);
      }
      return o;
    }
    case AnswerShape::Kind::Rows: {
      auto a = nlohmann::json::array();
      for (const auto& row : t.rows) a.push_back(record(row));
      return {{shape.name, a}};
    }
  }
  return nullptr;
}

inline nlohmann::json shape_values(const std::string& spec, const query::ResultTable& t) {
  return shape_values(parse_shape(spec), t);
}

// Structural equality with a relative tolerance on non-integer numbers.
inline bool values_match(const nlohmann::json& a, const nlohmann::json& b, double tol = 1e-9) {
  if (a.is_number() && b.is_number()) {
    if (a.is_number_integer() && b.is_number_integer()) return a.get<std::int64_t>() == b.get<std::int64_t>();
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      auto jt = b.find(it.key());
      if (jt == b.end() || !values_match(*it, *jt, tol)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!values_match(a[i], b[i], tol)) return false;
    return true;
  }
  return a == b;
}

}  // namespace wkg::agent
