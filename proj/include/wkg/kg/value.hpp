#pragma once
// Property values stored on graph nodes and edges, also used as the runtime
// value of the query evaluator (which adds node/edge references).

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wkg/time.hpp"

namespace wkg::kg {

struct DateTime {
  double seconds = 0.0;  // since the run epoch
  bool operator==(const DateTime&) const = default;
};

// Reference to a node/edge of the graph being queried. Never stored as a
// property; produced only by query evaluation.
struct NodeRef {
  std::size_t index = 0;
  bool operator==(const NodeRef&) const = default;
};
struct EdgeRef {
  std::size_t index = 0;
  bool operator==(const EdgeRef&) const = default;
};

class Value;
using List = std::vector<Value>;

class Value {
 public:
  using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, DateTime,
                               List, NodeRef, EdgeRef>;

  enum class Kind { Null, Bool, Int, Float, Text, DateTime, List, Node, Edge };

  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : v_(b) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(DateTime t) : v_(t) {}
  Value(List l) : v_(std::move(l)) {}
  Value(NodeRef n) : v_(n) {}
  Value(EdgeRef e) : v_(e) {}

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_null() const { return kind() == Kind::Null; }
  bool is_numeric() const { return kind() == Kind::Int || kind() == Kind::Float; }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  DateTime as_datetime() const { return std::get<DateTime>(v_); }
  const List& as_list() const { return std::get<List>(v_); }
  NodeRef as_node() const { return std::get<NodeRef>(v_); }
  EdgeRef as_edge() const { return std::get<EdgeRef>(v_); }

  // Int or Float widened to double.
  double number() const {
    return kind() == Kind::Int ? static_cast<double>(as_int()) : as_float();
  }

  const Storage& storage() const { return v_; }

  bool operator==(const Value& o) const = default;

 private:
  Storage v_;
};

inline const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Null: return "Null";
    case Value::Kind::Bool: return "Bool";
    case Value::Kind::Int: return "Int";
    case Value::Kind::Float: return "Float";
    case Value::Kind::Text: return "Text";
    case Value::Kind::DateTime: return "DateTime";
    case Value::Kind::List: return "List";
    case Value::Kind::Node: return "Node";
    case Value::Kind::Edge: return "Relationship";
  }
  return "?";
}

// Total order used for ORDER BY, DISTINCT and grouping. Numbers compare across
// Int/Float; otherwise values order by kind. Null sorts after everything.
inline int compare(const Value& a, const Value& b) {
  using K = Value::Kind;
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind() == K::Int && b.kind() == K::Int)
      return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
    const double x = a.number(), y = b.number();
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) - std::isnan(y);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  auto rank = [](K k) {
    switch (k) {
      case K::Node: return 0;
      case K::Edge: return 1;
      case K::List: return 2;
      case K::Text: return 3;
      case K::Bool: return 4;
      case K::Int:
      case K::Float: return 5;
      case K::DateTime: return 6;
      case K::Null: return 7;
    }
    return 8;
  };
  if (rank(a.kind()) != rank(b.kind())) return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case K::Null: return 0;
    case K::Bool: return static_cast<int>(a.as_bool()) - static_cast<int>(b.as_bool());
    case K::Text: return a.as_text().compare(b.as_text()) < 0 ? -1 : (a.as_text() == b.as_text() ? 0 : 1);
    case K::DateTime: {
      const double x = a.as_datetime().seconds, y = b.as_datetime().seconds;
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case K::List: {
      const auto& x = a.as_list();
      const auto& y = b.as_list();
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (int c = compare(x[i], y[i]); c != 0) return c;
      return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
    }
    case K::Node: return a.as_node().index < b.as_node().index ? -1 : (a.as_node() == b.as_node() ? 0 : 1);
    case K::Edge: return a.as_edge().index < b.as_edge().index ? -1 : (a.as_edge() == b.as_edge() ? 0 : 1);
    default: return 0;
  }
}

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare(a, b) < 0; }
};

inline std::string to_display(const Value& v) {
  using K = Value::Kind;
  switch (v.kind()) {
    case K::Null: return "null";
    case K::Bool: return v.as_bool() ? "true" : "false";
    case K::Int: return std::to_string(v.as_int());
    case K::Float: return format_double(v.as_float());
    case K::Text: return v.as_text();
    case K::DateTime: return format_double(v.as_datetime().seconds) + "s";
    case K::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.as_list().size(); ++i) {
        if (i) out += ", ";
        out += to_display(v.as_list()[i]);
      }
      return out + "]";
    }
    case K::Node: return "node#" + std::to_string(v.as_node().index);
    case K::Edge: return "rel#" + std::to_string(v.as_edge().index);
  }
  return "?";
}

}  // namespace wkg::kg
