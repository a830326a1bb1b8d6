#pragma once
// Syntax tree of the supported Cypher subset.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wkg/kg/value.hpp"

namespace wkg::query {

using kg::Value;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  Literal,
  Variable,
  Property,   // args[0].name
  Unary,      // op: "-", "NOT", "IS NULL", "IS NOT NULL"
  Binary,     // op: arithmetic, comparison, AND/OR/XOR, IN
  Function,   // name lower-cased; count(*) has star = true
  Case,
  ListLiteral,
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Value literal;
  std::string name;  // variable, property key or function name
  std::string op;
  std::vector<ExprPtr> args;
  bool distinct = false;  // count(DISTINCT x)
  bool star = false;      // count(*)

  // CASE [subject] WHEN .. THEN .. [ELSE ..] END
  ExprPtr subject;
  std::vector<std::pair<ExprPtr, ExprPtr>> whens;
  ExprPtr otherwise;

  std::string text;  // source text, used for default column names and errors
  int line = 1;
  int column = 0;
};

inline const std::vector<std::string>& aggregate_functions() {
  static const std::vector<std::string> names{"count", "sum", "avg", "min", "max", "collect"};
  return names;
}

inline const std::vector<std::string>& scalar_functions() {
  static const std::vector<std::string> names{"tofloat", "tointeger", "abs", "round", "coalesce",
                                              "duration_seconds"};
  return names;
}

inline bool is_aggregate_name(const std::string& lower) {
  for (const auto& n : aggregate_functions())
    if (n == lower) return true;
  return false;
}

inline bool contains_aggregate(const Expr& e) {
  if (e.kind == ExprKind::Function && is_aggregate_name(e.name)) return true;
  for (const auto& a : e.args)
    if (a && contains_aggregate(*a)) return true;
  if (e.subject && contains_aggregate(*e.subject)) return true;
  for (const auto& [w, t] : e.whens)
    if (contains_aggregate(*w) || contains_aggregate(*t)) return true;
  return e.otherwise && contains_aggregate(*e.otherwise);
}

enum class Direction { Out, In, Either };

struct NodePattern {
  std::string var;  // generated name for anonymous nodes
  bool anonymous = false;
  std::optional<std::string> label;
  std::vector<std::pair<std::string, ExprPtr>> props;
};

struct RelPattern {
  std::string var;
  bool anonymous = false;
  std::optional<std::string> type;
  std::vector<std::pair<std::string, ExprPtr>> props;
  Direction dir = Direction::Out;
};

// nodes.size() == rels.size() + 1
struct Pattern {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;
};

struct Projection {
  ExprPtr expr;
  std::string alias;  // column name; the source text when no AS was given
  bool aliased = false;
};

struct SortKey {
  ExprPtr expr;
  bool descending = false;
};

struct Query;

struct Clause {
  enum class Kind { Match, Where, With, Unwind, Call, Return, OrderBy, Limit };
  Kind kind = Kind::Match;

  std::vector<Pattern> patterns;        // Match
  ExprPtr expr;                         // Where, Unwind, Limit
  std::string alias;                    // Unwind
  std::vector<Projection> projections;  // With, Return
  bool distinct = false;                // With, Return
  std::vector<SortKey> keys;            // OrderBy
  std::shared_ptr<const Query> subquery;  // Call
  std::vector<std::string> imports;     // Call

  int line = 1;
  int column = 0;
};

struct Query {
  std::vector<Clause> clauses;
  std::string text;
};

inline const char* clause_name(Clause::Kind k) {
  switch (k) {
    case Clause::Kind::Match: return "MATCH";
    case Clause::Kind::Where: return "WHERE";
    case Clause::Kind::With: return "WITH";
    case Clause::Kind::Unwind: return "UNWIND";
    case Clause::Kind::Call: return "CALL";
    case Clause::Kind::Return: return "RETURN";
    case Clause::Kind::OrderBy: return "ORDER BY";
    case Clause::Kind::Limit: return "LIMIT";
  }
  return "?";
}

}  // namespace wkg::query
