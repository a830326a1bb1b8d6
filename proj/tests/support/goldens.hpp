#pragma once
// Shared oracles for the query-engine suites and the acceptance runner:
// malformed-query goldens and a brute-force pattern enumerator over random
// graphs.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wkg/kg/graph.hpp"
#include "wkg/query/evaluator.hpp"

namespace wkg::testing_support {

using kg::EdgeType;
using kg::Label;
using query::Direction;
using query::ResultTable;
using query::run_query;

struct Malformed {
  const char* text;
  int line;
  int column;
  const char* found;
};

inline const std::vector<Malformed>& malformed_queries() {
  static const std::vector<Malformed> v{
      {"MATCH (s:SUPPLIER", 1, 17, "end of input"},
      {"MATCH (s:SUPPLIER RETURN s", 1, 18, "'RETURN'"},
      {"MATCH (s:SUPPLIER) RETURN", 1, 25, "end of input"},
      {"MATCH (s:SUPPLIER)\nWHERE s.supplier_id = RETURN s", 2, 22, "'RETURN'"},
      {"MATCH (a)-[r]-(b)-[x]->(c)-[y]->(d) RETURN a", 1, 26, "'-'"},
      {"MATCH (s) WITH s.supplier_id RETURN 1", 1, 29, "'RETURN'"},
      {"MATCH (s) WHERE count(s) > 1 RETURN s", 1, 16, "'count(s) > 1'"},
      {"MATCH (s) RETURN s MATCH (t) RETURN t", 1, 19, "'MATCH'"},
      {"MATCH (s) OPTIONAL MATCH (t) RETURN s", 1, 10, "'OPTIONAL'"},
      {"MATCH (s)\n  RETURN s.x +", 2, 14, "end of input"},
      {"MATCH (s)-[r:X]>(t) RETURN s", 1, 15, "'>'"},
      {"MATCH (s) RETURN s.x ORDER s", 1, 27, "'s'"},
  };
  return v;
}

// Rows rendered as display strings and sorted, for order-insensitive comparison.
inline std::vector<std::vector<std::string>> as_strings(const ResultTable& t) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : t.rows) {
    std::vector<std::string> row;
    for (const auto& v : r) row.push_back(kg::to_display(v));
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end());
  return out;
}


struct RandomGraph {
  kg::PropertyGraph graph;
  std::vector<Label> label;          // per node
  std::vector<std::string> key;      // per node
  std::vector<std::int64_t> value;   // node property v
  struct E {
    std::size_t src, dst;
    EdgeType type;
    std::int64_t w;
    std::string name;
  };
  std::vector<E> edges;
};

inline RandomGraph random_graph(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomGraph r;
  const std::size_t n = 4 + rng() % 12;
  const std::size_t m = rng() % 200;
  std::vector<kg::NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    const Label l = kg::kAllLabels[rng() % kg::kAllLabels.size()];
    const std::string k = "N" + std::to_string(i);
    const auto v = static_cast<std::int64_t>(rng() % 5);
    r.label.push_back(l);
    r.key.push_back(k);
    r.value.push_back(v);
    nodes.push_back({l, k, {{std::string(kg::key_property(l)), k}, {"v", v}}});
  }
  std::vector<kg::EdgeRecord> edges;
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t s = rng() % n, d = rng() % n;
    if (s == d) d = (d + 1) % n;
    const EdgeType t = kg::kAllEdgeTypes[rng() % kg::kAllEdgeTypes.size()];
    const auto w = static_cast<std::int64_t>(rng() % 4);
    const std::string pkg = "P" + std::to_string(e);
    r.edges.push_back({s, d, t, w, std::string(kg::edge_type_name(t)) + ":" + pkg});
    edges.push_back({t, nodes[s].node_key(), nodes[d].node_key(), {{"package_id", pkg}, {"w", w}}});
  }
  r.graph = kg::PropertyGraph(std::move(nodes), std::move(edges));
  return r;
}

struct Hop {
  std::optional<EdgeType> type;
  Direction dir;
};

using NodeCheck = std::function<bool(std::size_t)>;
using RowCheck = std::function<bool(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>;

// Enumerates every assignment of edges to hops and keeps the consistent ones.
inline std::vector<std::vector<std::string>> brute_force(const RandomGraph& g, const std::vector<NodeCheck>& nodes,
                                                  const std::vector<Hop>& hops, const RowCheck& check) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> es(hops.size()), ns(nodes.size());
  std::function<void(std::size_t)> rec = [&](std::size_t h) {
    if (h == hops.size()) {
      for (std::size_t i = 0; i < ns.size(); ++i)
        if (!nodes[i](ns[i])) return;
      if (!check(ns, es)) return;
      std::vector<std::string> row;
      for (std::size_t i = 0; i < ns.size(); ++i) {
        row.push_back(g.key[ns[i]]);
        if (i < es.size()) row.push_back(g.edges[es[i]].name);
      }
      out.push_back(std::move(row));
      return;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (std::find(es.begin(), es.begin() + static_cast<std::ptrdiff_t>(h), e) != es.begin() + static_cast<std::ptrdiff_t>(h))
        continue;
      const auto& ed = g.edges[e];
      if (hops[h].type && ed.type != *hops[h].type) continue;
      for (int flip = 0; flip < 2; ++flip) {
        if (flip == 0 && hops[h].dir == Direction::In) continue;
        if (flip == 1 && hops[h].dir == Direction::Out) continue;
        const std::size_t left = flip ? ed.dst : ed.src;
        const std::size_t right = flip ? ed.src : ed.dst;
        if (h > 0 && ns[h] != left) continue;
        ns[h] = left;
        ns[h + 1] = right;
        es[h] = e;
        rec(h + 1);
      }
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

inline NodeCheck any_node() {
  return [](std::size_t) { return true; };
}

inline NodeCheck with_label(const RandomGraph& g, Label l) {
  return [&g, l](std::size_t n) { return g.label[n] == l; };
}

inline RowCheck always() {
  return [](const auto&, const auto&) { return true; };
}

using Rows = std::vector<std::vector<std::string>>;

struct DifferentialCase {
  std::string query;
  Rows actual;
  Rows expected;
};

// Engine output against brute force for a fixed set of pattern shapes.
inline std::vector<DifferentialCase> differential_cases(const RandomGraph& rg, std::uint64_t seed) {
  const auto& g = rg;
  std::vector<DifferentialCase> out;
  auto add = [&](const std::string& q, Rows expected) {
    out.push_back({q, as_strings(run_query(q, rg.graph)), std::move(expected)});
  };
  add("MATCH (a)-[r]->(b) RETURN a, r, b",
      brute_force(g, {any_node(), any_node()}, {{std::nullopt, Direction::Out}}, always()));
  add("MATCH (a)-[r:AGV_TO_FL]-(b:FL) RETURN a, r, b",
      brute_force(g, {any_node(), with_label(g, Label::Fl)}, {{EdgeType::AgvToFl, Direction::Either}}, always()));
  add("MATCH (a:WORKER)-[r]->(b)<-[q:WORKER_TO_AGV]-(c) WHERE r.w >= q.w RETURN a, r, b, q, c",
      brute_force(g, {with_label(g, Label::Worker), any_node(), any_node()},
                  {{std::nullopt, Direction::Out}, {EdgeType::WorkerToAgv, Direction::In}},
                  [&](const auto&, const auto& es) { return g.edges[es[0]].w >= g.edges[es[1]].w; }));
  const auto two_hop = brute_force(g, {any_node(), any_node(), any_node()},
                                   {{std::nullopt, Direction::Out}, {std::nullopt, Direction::Out}},
                                   [&](const auto& ns, const auto&) { return g.value[ns[0]] < g.value[ns[2]]; });
  add("MATCH (a)-[r]->(b)-[q]->(c) WHERE a.v < c.v RETURN a, r, b, q, c", two_hop);
  // Same pattern split across two comma-separated parts.
  add("MATCH (a)-[r]->(b), (b)-[q]->(c) WHERE a.v < c.v RETURN a, r, b, q, c", two_hop);

  // Anchored on a key lookup in the middle of the pattern.
  const std::size_t pick = seed % rg.key.size();
  const std::string mid = rg.key[pick];
  const Label mid_label = rg.label[pick];
  add("MATCH (a)-[r]-(b:" + std::string(kg::label_name(mid_label)) + " {" + std::string(kg::key_property(mid_label)) +
          ": '" + mid + "'})-[s]->(c) RETURN a, r, b, s, c",
      brute_force(g, {any_node(), [&](std::size_t n) { return rg.key[n] == mid; }, any_node()},
                  {{std::nullopt, Direction::Either}, {std::nullopt, Direction::Out}}, always()));
  add("MATCH (a)-[r]->(b) RETURN count(*) AS n", {{std::to_string(rg.edges.size())}});
  return out;
}

}  // namespace wkg::testing_support
