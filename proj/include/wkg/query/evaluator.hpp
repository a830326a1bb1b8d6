#pragma once
// Evaluation of a parsed query against a PropertyGraph.
//
// Rows are slot-indexed value vectors; a Scope maps variable names to slots.
// MATCH enumerates bindings in a fixed order (outer row, then label index
// order, then edge insertion order), which is the default output order when no
// ORDER BY is given. A WHERE directly after MATCH is split into conjuncts and
// each conjunct is checked as soon as its variables are bound.
//
// Null follows Cypher: comparisons and arithmetic with null give null, WHERE
// keeps only rows whose predicate is exactly true, aggregates skip nulls.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wkg/error.hpp"
#include "wkg/kg/graph.hpp"
#include "wkg/query/ast.hpp"
#include "wkg/query/parser.hpp"
#include "wkg/query/result.hpp"

namespace wkg::query {

namespace detail {

using kg::Value;
using Row = std::vector<Value>;
using K = Value::Kind;

struct RowLess {
  bool operator()(const Row& a, const Row& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
      if (int c = kg::compare(a[i], b[i]); c != 0) return c < 0;
    return a.size() < b.size();
  }
};

struct Scope {
  std::vector<std::string> names;

  int find(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }
  int add(const std::string& n) {
    names.push_back(n);
    return static_cast<int>(names.size()) - 1;
  }
  std::size_t size() const { return names.size(); }
};

struct State {
  Scope scope;
  std::vector<Row> rows;
};

[[noreturn]] inline void type_error(const Expr& e, const std::string& detail) {
  throw Error(ErrorCode::TypeError, "'" + e.text + "': " + detail);
}

inline void collect_vars(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::Variable) out.push_back(&e);
  for (const auto& a : e.args)
    if (a) collect_vars(*a, out);
  if (e.subject) collect_vars(*e.subject, out);
  for (const auto& [w, t] : e.whens) {
    collect_vars(*w, out);
    collect_vars(*t, out);
  }
  if (e.otherwise) collect_vars(*e.otherwise, out);
}

inline void check_bound(const Expr& e, const Scope& scope) {
  std::vector<const Expr*> vars;
  collect_vars(e, vars);
  for (const Expr* v : vars)
    if (scope.find(v->name) < 0)
      throw Error(ErrorCode::UnboundVariable,
                  v->name + " (line " + std::to_string(v->line) + ", column " +
                      std::to_string(v->column) + ")");
}

inline void split_conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::Binary && e->op == "AND") {
    split_conjuncts(e->args[0], out);
    split_conjuncts(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

inline bool truthy(const Value& v) { return v.kind() == K::Bool && v.as_bool(); }

// Equality with Cypher null semantics; returns Null, or Bool.
inline Value equals(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return {};
  if (a.is_numeric() && b.is_numeric()) return kg::compare(a, b) == 0;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == K::List) {
    const auto& x = a.as_list();
    const auto& y = b.as_list();
    if (x.size() != y.size()) return false;
    bool unknown = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      Value e = equals(x[i], y[i]);
      if (e.is_null()) unknown = true;
      else if (!e.as_bool()) return false;
    }
    return unknown ? Value() : Value(true);
  }
  return kg::compare(a, b) == 0;
}

class Evaluator {
 public:
  explicit Evaluator(const kg::PropertyGraph& g) : g_(g) {}

  ResultTable run(const Query& q) {
    State st;
    st.rows.emplace_back();
    st = exec(q, std::move(st));
    ResultTable out;
    out.columns = st.scope.names;
    out.rows.reserve(st.rows.size());
    for (auto& r : st.rows) {
      for (auto& v : r) v = externalize(v);
      out.rows.push_back(std::move(r));
    }
    return out;
  }

 private:
  struct Ctx {
    const Scope* scope = nullptr;
    const Row* row = nullptr;
    const std::vector<const Row*>* group = nullptr;
  };

  // Entity references leave the engine as their key text.
  Value externalize(const Value& v) const {
    switch (v.kind()) {
      case K::Node: return g_.node(v.as_node().index).key;
      case K::Edge: {
        const auto& e = g_.edge(v.as_edge().index);
        return std::string(kg::edge_type_name(e.type)) + ":" + e.package_id();
      }
      case K::List: {
        kg::List out;
        for (const auto& x : v.as_list()) out.push_back(externalize(x));
        return out;
      }
      default: return v;
    }
  }

  // ---- pipeline ----

  State exec(const Query& q, State st) {
    const auto& cs = q.clauses;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Clause& c = cs[i];
      switch (c.kind) {
        case Clause::Kind::Match: {
          const Clause* where =
              (i + 1 < cs.size() && cs[i + 1].kind == Clause::Kind::Where) ? &cs[i + 1] : nullptr;
          exec_match(c, where ? where->expr : nullptr, st);
          if (where) ++i;
          break;
        }
        case Clause::Kind::Where: exec_where(c, st); break;
        case Clause::Kind::With:
        case Clause::Kind::Return: st = project(c, st); break;
        case Clause::Kind::Unwind: exec_unwind(c, st); break;
        case Clause::Kind::Call: exec_call(c, st); break;
        case Clause::Kind::OrderBy: exec_order(c, st); break;
        case Clause::Kind::Limit: exec_limit(c, st); break;
      }
    }
    return st;
  }

  void exec_where(const Clause& c, State& st) {
    check_bound(*c.expr, st.scope);
    std::vector<Row> kept;
    for (auto& r : st.rows)
      if (truthy(eval(*c.expr, {&st.scope, &r, nullptr}))) kept.push_back(std::move(r));
    st.rows = std::move(kept);
  }

  void exec_unwind(const Clause& c, State& st) {
    check_bound(*c.expr, st.scope);
    if (st.scope.find(c.alias) >= 0)
      throw Error(ErrorCode::TypeError, "variable '" + c.alias + "' already declared");
    Scope scope = st.scope;
    scope.add(c.alias);
    std::vector<Row> out;
    for (const auto& r : st.rows) {
      Value v = eval(*c.expr, {&st.scope, &r, nullptr});
      if (v.is_null()) continue;
      auto emit = [&](Value x) {
        Row nr = r;
        nr.push_back(std::move(x));
        out.push_back(std::move(nr));
      };
      if (v.kind() == K::List)
        for (const auto& x : v.as_list()) emit(x);
      else
        emit(std::move(v));
    }
    st.scope = std::move(scope);
    st.rows = std::move(out);
  }

  void exec_call(const Clause& c, State& st) {
    State seed;
    std::vector<int> import_slots;
    for (const auto& name : c.imports) {
      int slot = st.scope.find(name);
      if (slot < 0) throw Error(ErrorCode::UnboundVariable, name + " (CALL import)");
      import_slots.push_back(slot);
      seed.scope.add(name);
    }
    Scope sub_scope = exec(*c.subquery, seed).scope;  // columns, from an empty run
    Scope scope = st.scope;
    for (const auto& n : sub_scope.names) {
      if (scope.find(n) >= 0)
        throw SyntaxError(c.line, c.column, {"subquery columns distinct from outer variables"},
                          "'" + n + "'");
      scope.add(n);
    }
    std::vector<Row> out;
    for (const auto& r : st.rows) {
      State in;
      in.scope = seed.scope;
      Row imported;
      for (int s : import_slots) imported.push_back(r[static_cast<std::size_t>(s)]);
      in.rows.push_back(std::move(imported));
      State res = exec(*c.subquery, std::move(in));
      for (auto& sr : res.rows) {
        Row nr = r;
        nr.insert(nr.end(), std::make_move_iterator(sr.begin()), std::make_move_iterator(sr.end()));
        out.push_back(std::move(nr));
      }
    }
    st.scope = std::move(scope);
    st.rows = std::move(out);
  }

  void exec_order(const Clause& c, State& st) {
    for (const auto& k : c.keys) check_bound(*k.expr, st.scope);
    std::vector<std::pair<Row, std::size_t>> keyed;
    keyed.reserve(st.rows.size());
    for (std::size_t i = 0; i < st.rows.size(); ++i) {
      Row key;
      for (const auto& k : c.keys) key.push_back(eval(*k.expr, {&st.scope, &st.rows[i], nullptr}));
      keyed.emplace_back(std::move(key), i);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      for (std::size_t k = 0; k < c.keys.size(); ++k) {
        int cmp = kg::compare(a.first[k], b.first[k]);
        if (cmp != 0) return c.keys[k].descending ? cmp > 0 : cmp < 0;
      }
      return false;
    });
    std::vector<Row> out;
    out.reserve(st.rows.size());
    for (auto& [key, i] : keyed) out.push_back(std::move(st.rows[i]));
    st.rows = std::move(out);
  }

  void exec_limit(const Clause& c, State& st) {
    Scope empty;
    check_bound(*c.expr, empty);
    Row none;
    Value v = eval(*c.expr, {&empty, &none, nullptr});
    if (v.kind() != K::Int || v.as_int() < 0) type_error(*c.expr, "LIMIT needs a non-negative integer");
    if (st.rows.size() > static_cast<std::size_t>(v.as_int()))
      st.rows.resize(static_cast<std::size_t>(v.as_int()));
  }

  State project(const Clause& c, State& in) {
    for (const auto& p : c.projections) check_bound(*p.expr, in.scope);
    State out;
    for (const auto& p : c.projections) {
      if (out.scope.find(p.alias) >= 0)
        throw SyntaxError(c.line, c.column, {"distinct column names"}, "'" + p.alias + "'");
      out.scope.add(p.alias);
    }
    const bool aggregating = std::any_of(c.projections.begin(), c.projections.end(),
                                         [](const Projection& p) { return contains_aggregate(*p.expr); });
    if (!aggregating) {
      out.rows.reserve(in.rows.size());
      for (const auto& r : in.rows) {
        Row nr;
        nr.reserve(c.projections.size());
        for (const auto& p : c.projections) nr.push_back(eval(*p.expr, {&in.scope, &r, nullptr}));
        out.rows.push_back(std::move(nr));
      }
    } else {
      std::vector<std::size_t> keys;
      for (std::size_t i = 0; i < c.projections.size(); ++i)
        if (!contains_aggregate(*c.projections[i].expr)) keys.push_back(i);
      std::map<Row, std::size_t, RowLess> index;
      std::vector<std::vector<const Row*>> groups;
      std::vector<Row> group_keys;
      for (const auto& r : in.rows) {
        Row key;
        for (std::size_t k : keys) key.push_back(eval(*c.projections[k].expr, {&in.scope, &r, nullptr}));
        auto [it, fresh] = index.try_emplace(key, groups.size());
        if (fresh) {
          groups.emplace_back();
          group_keys.push_back(std::move(key));
        }
        groups[it->second].push_back(&r);
      }
      if (groups.empty() && keys.empty()) {
        groups.emplace_back();
        group_keys.emplace_back();
      }
      const Row blank(in.scope.size());
      for (std::size_t g = 0; g < groups.size(); ++g) {
        Row nr(c.projections.size());
        const Row* first = groups[g].empty() ? &blank : groups[g].front();
        for (std::size_t k = 0; k < keys.size(); ++k) nr[keys[k]] = group_keys[g][k];
        for (std::size_t i = 0; i < c.projections.size(); ++i)
          if (contains_aggregate(*c.projections[i].expr))
            nr[i] = eval(*c.projections[i].expr, {&in.scope, first, &groups[g]});
        out.rows.push_back(std::move(nr));
      }
    }
    if (c.distinct) {
      std::set<Row, RowLess> seen;
      std::vector<Row> kept;
      for (auto& r : out.rows)
        if (seen.insert(r).second) kept.push_back(std::move(r));
      out.rows = std::move(kept);
    }
    return out;
  }

  // ---- MATCH ----

  struct Constraint {
    std::string key;
    const Expr* expr;
  };

  struct Step {
    bool expand = false;
    // scan / target node
    int node_slot = -1;
    std::optional<kg::Label> label;
    std::vector<Constraint> node_props;
    // expansion
    int from_slot = -1;
    int rel_slot = -1;
    std::optional<kg::EdgeType> type;
    std::vector<Constraint> rel_props;
    Direction dir = Direction::Out;  // relative to from -> node
  };

  std::vector<Constraint> constraints(const std::vector<std::pair<std::string, ExprPtr>>& props,
                                      const Scope& outer) const {
    std::vector<Constraint> out;
    for (const auto& [k, e] : props) {
      check_bound(*e, outer);
      out.push_back({k, e.get()});
    }
    return out;
  }

  void exec_match(const Clause& c, const ExprPtr& where, State& st) {
    const Scope outer = st.scope;
    Scope scope = st.scope;
    std::vector<char> is_rel(scope.size(), 0);
    std::vector<char> bound(scope.size(), 1);
    std::vector<int> new_rel_slots;
    std::vector<Step> steps;

    auto slot_for = [&](const std::string& var, bool rel) {
      int s = scope.find(var);
      if (s < 0) {
        s = scope.add(var);
        is_rel.push_back(rel);
        bound.push_back(0);
        if (rel) new_rel_slots.push_back(s);
      } else if (static_cast<std::size_t>(s) >= outer.size() && is_rel[static_cast<std::size_t>(s)] != rel) {
        throw Error(ErrorCode::TypeError, "'" + var + "' used as both node and relationship");
      }
      return s;
    };

    for (const auto& pat : c.patterns) {
      std::vector<int> node_slots, rel_slots;
      for (const auto& n : pat.nodes) node_slots.push_back(slot_for(n.var, false));
      for (const auto& r : pat.rels) rel_slots.push_back(slot_for(r.var, true));

      auto node_label = [&](const NodePattern& n) -> std::optional<kg::Label> {
        if (!n.label) return std::nullopt;
        auto l = kg::parse_label(*n.label);
        if (!l) throw Error(ErrorCode::UnknownLabelOrType, *n.label);
        return l;
      };
      auto rel_type = [&](const RelPattern& r) -> std::optional<kg::EdgeType> {
        if (!r.type) return std::nullopt;
        auto t = kg::parse_edge_type(*r.type);
        if (!t) throw Error(ErrorCode::UnknownLabelOrType, *r.type);
        return t;
      };

      std::size_t anchor = 0;
      bool found = false;
      for (std::size_t i = 0; i < pat.nodes.size() && !found; ++i)
        if (bound[static_cast<std::size_t>(node_slots[i])]) anchor = i, found = true;
      for (std::size_t i = 0; i < pat.nodes.size() && !found; ++i) {
        auto l = node_label(pat.nodes[i]);
        if (!l) continue;
        for (const auto& [k, e] : pat.nodes[i].props)
          if (k == kg::key_property(*l)) anchor = i, found = true;
      }

      Step scan;
      scan.node_slot = node_slots[anchor];
      scan.label = node_label(pat.nodes[anchor]);
      scan.node_props = constraints(pat.nodes[anchor].props, outer);
      steps.push_back(scan);
      bound[static_cast<std::size_t>(scan.node_slot)] = 1;

      auto expand = [&](std::size_t from, std::size_t rel, std::size_t to, bool rightward) {
        Step s;
        s.expand = true;
        s.from_slot = node_slots[from];
        s.rel_slot = rel_slots[rel];
        s.type = rel_type(pat.rels[rel]);
        s.rel_props = constraints(pat.rels[rel].props, outer);
        const auto d = pat.rels[rel].dir;
        // Pattern direction is left-to-right; flip when walking leftwards.
        if (d == Direction::Either) s.dir = Direction::Either;
        else if ((d == Direction::Out) == rightward) s.dir = Direction::Out;
        else s.dir = Direction::In;
        s.node_slot = node_slots[to];
        s.label = node_label(pat.nodes[to]);
        s.node_props = constraints(pat.nodes[to].props, outer);
        steps.push_back(s);
        bound[static_cast<std::size_t>(s.rel_slot)] = 1;
        bound[static_cast<std::size_t>(s.node_slot)] = 1;
      };
      for (std::size_t i = anchor; i + 1 < pat.nodes.size(); ++i) expand(i, i, i + 1, true);
      for (std::size_t i = anchor; i > 0; --i) expand(i, i - 1, i - 1, false);
    }

    // Conjuncts of the WHERE, each attached to the first step after which all
    // its variables are bound (index 0 = before any step).
    std::vector<std::vector<ExprPtr>> checks(steps.size() + 1);
    if (where) {
      check_bound(*where, scope);
      std::vector<ExprPtr> conjuncts;
      split_conjuncts(where, conjuncts);
      std::vector<std::size_t> bound_at(scope.size(), 0);
      for (std::size_t s = 0; s < steps.size(); ++s) {
        auto mark = [&](int slot) {
          if (static_cast<std::size_t>(slot) >= outer.size() && bound_at[static_cast<std::size_t>(slot)] == 0)
            bound_at[static_cast<std::size_t>(slot)] = s + 1;
        };
        mark(steps[s].node_slot);
        if (steps[s].expand) mark(steps[s].rel_slot);
      }
      for (const auto& cj : conjuncts) {
        std::vector<const Expr*> vars;
        collect_vars(*cj, vars);
        std::size_t at = 0;
        for (const Expr* v : vars) at = std::max(at, bound_at[static_cast<std::size_t>(scope.find(v->name))]);
        checks[at].push_back(cj);
      }
    }

    std::vector<Row> out;
    for (auto& r : st.rows) {
      Row row = r;
      row.resize(scope.size());
      std::vector<char> is_set(scope.size(), 0);
      std::fill(is_set.begin(), is_set.begin() + static_cast<std::ptrdiff_t>(outer.size()), 1);
      MatchRun run{scope, steps, checks, new_rel_slots, row, is_set, out, Ctx{&outer, &r, nullptr}};
      if (passes(run, 0)) descend(run, 0);
    }
    st.scope = std::move(scope);
    st.rows = std::move(out);
  }

  struct MatchRun {
    const Scope& scope;
    const std::vector<Step>& steps;
    const std::vector<std::vector<ExprPtr>>& checks;
    const std::vector<int>& rel_slots;
    Row& row;
    std::vector<char>& is_set;
    std::vector<Row>& out;
    Ctx outer;
  };

  bool passes(MatchRun& m, std::size_t at) {
    for (const auto& cj : m.checks[at])
      if (!truthy(eval(*cj, {&m.scope, &m.row, nullptr}))) return false;
    return true;
  }

  bool props_match(const kg::Props& props, const std::vector<Constraint>& cs, const Ctx& outer) {
    for (const auto& c : cs) {
      auto it = props.find(c.key);
      if (it == props.end()) return false;
      if (!truthy(equals(it->second, eval(*c.expr, outer)))) return false;
    }
    return true;
  }

  bool node_ok(std::size_t n, const Step& s, const Ctx& outer) {
    const auto& rec = g_.node(n);
    if (s.label && rec.label != *s.label) return false;
    return props_match(rec.props, s.node_props, outer);
  }

  // Binds `slot` to `v`, or checks consistency when already bound. Returns
  // false on conflict; `fresh` reports whether a binding was made.
  bool bind(MatchRun& m, int slot, Value v, bool& fresh) {
    auto s = static_cast<std::size_t>(slot);
    fresh = false;
    if (m.is_set[s]) return m.row[s] == v;
    m.row[s] = std::move(v);
    m.is_set[s] = 1;
    fresh = true;
    return true;
  }

  void unbind(MatchRun& m, int slot) {
    m.is_set[static_cast<std::size_t>(slot)] = 0;
    m.row[static_cast<std::size_t>(slot)] = Value();
  }

  void descend(MatchRun& m, std::size_t i) {
    if (i == m.steps.size()) {
      m.out.push_back(m.row);
      return;
    }
    const Step& s = m.steps[i];
    auto try_node = [&](std::size_t n) {
      if (!node_ok(n, s, m.outer)) return;
      bool fresh = false;
      if (!bind(m, s.node_slot, kg::NodeRef{n}, fresh)) return;
      if (passes(m, i + 1)) descend(m, i + 1);
      if (fresh) unbind(m, s.node_slot);
    };

    if (!s.expand) {
      const auto slot = static_cast<std::size_t>(s.node_slot);
      if (m.is_set[slot]) {
        const Value& v = m.row[slot];
        if (v.kind() == K::Node) try_node(v.as_node().index);
        else if (!v.is_null()) throw Error(ErrorCode::TypeError, "'" + m.scope.names[slot] + "' is not a node");
        return;
      }
      if (s.label) {
        for (const auto& c : s.node_props)
          if (c.key == kg::key_property(*s.label)) {
            Value key = eval(*c.expr, m.outer);
            if (key.kind() != K::Text) return;
            if (auto n = g_.find_node(*s.label, key.as_text())) try_node(*n);
            return;
          }
        for (std::size_t n : g_.nodes_with_label(*s.label)) try_node(n);
      } else {
        for (std::size_t n = 0; n < g_.node_count(); ++n) try_node(n);
      }
      return;
    }

    const Value& from = m.row[static_cast<std::size_t>(s.from_slot)];
    if (from.kind() != K::Node) {
      if (from.is_null()) return;
      throw Error(ErrorCode::TypeError, "'" + m.scope.names[static_cast<std::size_t>(s.from_slot)] + "' is not a node");
    }
    const std::size_t at = from.as_node().index;
    auto walk = [&](const std::vector<std::size_t>& edges, bool outgoing) {
      for (std::size_t e : edges) {
        const auto& rec = g_.edge(e);
        if (s.type && rec.type != *s.type) continue;
        if (!props_match(rec.props, s.rel_props, m.outer)) continue;
        const std::size_t other = outgoing ? g_.target(e) : g_.source(e);
        if (other == kg::PropertyGraph::npos) continue;
        bool reused = false;
        for (int rs : m.rel_slots)
          if (rs != s.rel_slot && m.is_set[static_cast<std::size_t>(rs)] &&
              m.row[static_cast<std::size_t>(rs)] == Value(kg::EdgeRef{e}))
            reused = true;
        if (reused) continue;
        bool rel_fresh = false;
        if (!bind(m, s.rel_slot, kg::EdgeRef{e}, rel_fresh)) continue;
        if (node_ok(other, s, m.outer)) {
          bool node_fresh = false;
          if (bind(m, s.node_slot, kg::NodeRef{other}, node_fresh)) {
            if (passes(m, i + 1)) descend(m, i + 1);
            if (node_fresh) unbind(m, s.node_slot);
          }
        }
        if (rel_fresh) unbind(m, s.rel_slot);
      }
    };
    if (s.dir != Direction::In) walk(g_.out_edges(at), true);
    if (s.dir != Direction::Out) walk(g_.in_edges(at), false);
  }

  // ---- expressions ----

  Value lookup(const Expr& e, const Ctx& ctx) const {
    int slot = ctx.scope->find(e.name);
    if (slot < 0) throw Error(ErrorCode::UnboundVariable, e.name);
    return (*ctx.row)[static_cast<std::size_t>(slot)];
  }

  Value eval(const Expr& e, const Ctx& ctx) {
    switch (e.kind) {
      case ExprKind::Literal: return e.literal;
      case ExprKind::Variable: return lookup(e, ctx);
      case ExprKind::Property: {
        Value base = eval(*e.args[0], ctx);
        const kg::Props* props = nullptr;
        if (base.is_null()) return {};
        if (base.kind() == K::Node) props = &g_.node(base.as_node().index).props;
        else if (base.kind() == K::Edge) props = &g_.edge(base.as_edge().index).props;
        else type_error(e, std::string("property access on ") + kg::kind_name(base.kind()));
        auto it = props->find(e.name);
        return it == props->end() ? Value() : it->second;
      }
      case ExprKind::ListLiteral: {
        kg::List out;
        for (const auto& a : e.args) out.push_back(eval(*a, ctx));
        return out;
      }
      case ExprKind::Unary: return eval_unary(e, ctx);
      case ExprKind::Binary: return eval_binary(e, ctx);
      case ExprKind::Case: {
        if (e.subject) {
          Value subject = eval(*e.subject, ctx);
          for (const auto& [w, t] : e.whens)
            if (truthy(equals(subject, eval(*w, ctx)))) return eval(*t, ctx);
        } else {
          for (const auto& [w, t] : e.whens) {
            Value cond = eval(*w, ctx);
            if (!cond.is_null() && cond.kind() != K::Bool) type_error(*w, "CASE condition must be boolean");
            if (truthy(cond)) return eval(*t, ctx);
          }
        }
        return e.otherwise ? eval(*e.otherwise, ctx) : Value();
      }
      case ExprKind::Function:
        return is_aggregate_name(e.name) ? eval_aggregate(e, ctx) : eval_scalar(e, ctx);
    }
    return {};
  }

  Value eval_unary(const Expr& e, const Ctx& ctx) {
    Value v = eval(*e.args[0], ctx);
    if (e.op == "IS NULL") return v.is_null();
    if (e.op == "IS NOT NULL") return !v.is_null();
    if (v.is_null()) return {};
    if (e.op == "NOT") {
      if (v.kind() != K::Bool) type_error(e, std::string("NOT on ") + kg::kind_name(v.kind()));
      return !v.as_bool();
    }
    if (v.kind() == K::Int) return -v.as_int();
    if (v.kind() == K::Float) return -v.as_float();
    type_error(e, std::string("negation of ") + kg::kind_name(v.kind()));
  }

  Value logic(const Expr& e, const Ctx& ctx) {
    auto as_logic = [&](const Value& v, const Expr& src) -> int {
      if (v.is_null()) return -1;
      if (v.kind() != K::Bool) type_error(src, std::string(e.op) + " on " + kg::kind_name(v.kind()));
      return v.as_bool() ? 1 : 0;
    };
    const int a = as_logic(eval(*e.args[0], ctx), *e.args[0]);
    if (e.op == "AND" && a == 0) return false;
    if (e.op == "OR" && a == 1) return true;
    const int b = as_logic(eval(*e.args[1], ctx), *e.args[1]);
    if (e.op == "AND") {
      if (b == 0) return false;
      return (a == 1 && b == 1) ? Value(true) : Value();
    }
    if (e.op == "OR") {
      if (b == 1) return true;
      return (a == 0 && b == 0) ? Value(false) : Value();
    }
    if (a < 0 || b < 0) return {};
    return a != b;
  }

  Value eval_binary(const Expr& e, const Ctx& ctx) {
    const std::string& op = e.op;
    if (op == "AND" || op == "OR" || op == "XOR") return logic(e, ctx);
    Value a = eval(*e.args[0], ctx);
    Value b = eval(*e.args[1], ctx);
    if (op == "IN") {
      if (b.is_null()) return {};
      if (b.kind() != K::List) type_error(e, std::string("IN needs a list, got ") + kg::kind_name(b.kind()));
      bool unknown = false;
      for (const auto& x : b.as_list()) {
        Value eq = equals(a, x);
        if (eq.is_null()) unknown = true;
        else if (eq.as_bool()) return true;
      }
      return unknown ? Value() : Value(false);
    }
    if (op == "=") return equals(a, b);
    if (op == "<>") {
      Value eq = equals(a, b);
      return eq.is_null() ? eq : Value(!eq.as_bool());
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      if (a.is_null() || b.is_null()) return {};
      const bool comparable = (a.is_numeric() && b.is_numeric()) ||
                              (a.kind() == b.kind() && (a.kind() == K::Text || a.kind() == K::DateTime ||
                                                        a.kind() == K::Bool));
      if (!comparable) return {};
      const int c = kg::compare(a, b);
      if (op == "<") return c < 0;
      if (op == "<=") return c <= 0;
      if (op == ">") return c > 0;
      return c >= 0;
    }
    // arithmetic
    if (a.is_null() || b.is_null()) return {};
    if (op == "+") {
      if (a.kind() == K::List) {
        kg::List out = a.as_list();
        if (b.kind() == K::List) out.insert(out.end(), b.as_list().begin(), b.as_list().end());
        else out.push_back(b);
        return out;
      }
      if (a.kind() == K::Text || b.kind() == K::Text) {
        if (a.kind() == K::Node || a.kind() == K::Edge || b.kind() == K::Node || b.kind() == K::Edge)
          type_error(e, "cannot concatenate entities");
        return kg::to_display(a) + kg::to_display(b);
      }
    }
    if (!a.is_numeric() || !b.is_numeric())
      type_error(e, std::string("'") + op + "' on " + kg::kind_name(a.kind()) + " and " + kg::kind_name(b.kind()));
    if (a.kind() == K::Int && b.kind() == K::Int) {
      const std::int64_t x = a.as_int(), y = b.as_int();
      if (op == "+") return x + y;
      if (op == "-") return x - y;
      if (op == "*") return x * y;
      if (y == 0) type_error(e, "division by zero");
      if (op == "/") return x / y;
      return x % y;
    }
    const double x = a.number(), y = b.number();
    if (op == "+") return x + y;
    if (op == "-") return x - y;
    if (op == "*") return x * y;
    if (y == 0.0) type_error(e, "division by zero");
    if (op == "/") return x / y;
    return std::fmod(x, y);
  }

  Value eval_scalar(const Expr& e, const Ctx& ctx) {
    const std::string& f = e.name;
    if (f == "coalesce") {
      for (const auto& a : e.args) {
        Value v = eval(*a, ctx);
        if (!v.is_null()) return v;
      }
      return {};
    }
    if (f == "duration_seconds") {
      Value a = eval(*e.args[0], ctx);
      Value b = eval(*e.args[1], ctx);
      if (a.is_null() || b.is_null()) return {};
      if (a.kind() != K::DateTime || b.kind() != K::DateTime)
        type_error(e, std::string("duration_seconds needs DateTime arguments, got ") +
                          kg::kind_name(a.kind()) + " and " + kg::kind_name(b.kind()));
      return b.as_datetime().seconds - a.as_datetime().seconds;
    }
    if (f == "round") {
      Value v = eval(*e.args[0], ctx);
      Value digits = e.args.size() > 1 ? eval(*e.args[1], ctx) : Value(0);
      if (v.is_null() || digits.is_null()) return {};
      if (!v.is_numeric()) type_error(e, std::string("round of ") + kg::kind_name(v.kind()));
      if (digits.kind() != K::Int || digits.as_int() < 0 || digits.as_int() > 15)
        type_error(e, "round precision must be an integer in [0, 15]");
      const double scale = std::pow(10.0, static_cast<double>(digits.as_int()));
      return std::round(v.number() * scale) / scale;
    }
    Value v = eval(*e.args[0], ctx);
    if (v.is_null()) return {};
    if (f == "abs") {
      if (v.kind() == K::Int) return v.as_int() < 0 ? -v.as_int() : v.as_int();
      if (v.kind() == K::Float) return std::fabs(v.as_float());
      type_error(e, std::string("abs of ") + kg::kind_name(v.kind()));
    }
    if (f == "tofloat") {
      switch (v.kind()) {
        case K::Int: return static_cast<double>(v.as_int());
        case K::Float: return v;
        case K::DateTime: return v.as_datetime().seconds;
        case K::Text: {
          try {
            std::size_t used = 0;
            double d = std::stod(v.as_text(), &used);
            return used == v.as_text().size() ? Value(d) : Value();
          } catch (const std::exception&) {
            return {};
          }
        }
        default: type_error(e, std::string("toFloat of ") + kg::kind_name(v.kind()));
      }
    }
    if (f == "tointeger") {
      switch (v.kind()) {
        case K::Int: return v;
        case K::Float:
        case K::DateTime: {
          const double d = v.kind() == K::Float ? v.as_float() : v.as_datetime().seconds;
          if (!std::isfinite(d)) type_error(e, "toInteger of a non-finite number");
          return static_cast<std::int64_t>(std::trunc(d));
        }
        case K::Text: {
          try {
            std::size_t used = 0;
            long long i = std::stoll(v.as_text(), &used);
            return used == v.as_text().size() ? Value(static_cast<std::int64_t>(i)) : Value();
          } catch (const std::exception&) {
            return {};
          }
        }
        default: type_error(e, std::string("toInteger of ") + kg::kind_name(v.kind()));
      }
    }
    type_error(e, "unknown function " + f);
  }

  Value eval_aggregate(const Expr& e, const Ctx& ctx) {
    if (!ctx.group) type_error(e, "aggregate outside WITH/RETURN projection");
    const std::string& f = e.name;
    if (e.star) return static_cast<std::int64_t>(ctx.group->size());
    std::vector<Value> values;
    values.reserve(ctx.group->size());
    for (const Row* r : *ctx.group) {
      Value v = eval(*e.args[0], {ctx.scope, r, nullptr});
      if (!v.is_null()) values.push_back(std::move(v));
    }
    if (e.distinct) {
      std::set<Value, kg::ValueLess> seen;
      std::vector<Value> kept;
      for (auto& v : values)
        if (seen.insert(v).second) kept.push_back(std::move(v));
      values = std::move(kept);
    }
    if (f == "count") return static_cast<std::int64_t>(values.size());
    if (f == "collect") return kg::List(values.begin(), values.end());
    if (f == "min" || f == "max") {
      if (values.empty()) return {};
      const Value* best = &values[0];
      for (const auto& v : values) {
        const int c = kg::compare(v, *best);
        if (f == "min" ? c < 0 : c > 0) best = &v;
      }
      return *best;
    }
    // sum / avg
    bool all_int = true;
    for (const auto& v : values) {
      if (!v.is_numeric()) type_error(e, f + " over " + kg::kind_name(v.kind()));
      all_int &= v.kind() == K::Int;
    }
    if (f == "sum" && all_int) {
      std::int64_t s = 0;
      for (const auto& v : values) s += v.as_int();
      return s;
    }
    double s = 0.0;
    for (const auto& v : values) s += v.number();
    if (f == "sum") return s;
    if (values.empty()) return {};
    return s / static_cast<double>(values.size());
  }

  const kg::PropertyGraph& g_;
};

}  // namespace detail

inline ResultTable evaluate_query(const Query& ast, const kg::PropertyGraph& graph) {
  return detail::Evaluator(graph).run(ast);
}

inline ResultTable run_query(std::string_view text, const kg::PropertyGraph& graph) {
  return evaluate_query(parse_query(text), graph);
}

}  // namespace wkg::query
