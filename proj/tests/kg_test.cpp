#include <algorithm>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "wkg/kg/build.hpp"
#include "wkg/kg/graph_io.hpp"
#include "wkg/sim/simulation.hpp"

using namespace wkg;
using namespace wkg::kg;

namespace {

sim::EventLog default_log(std::uint64_t seed = 7) {
  sim::SimConfig c;
  c.seed = seed;
  return sim::run_simulation(c);
}

bool has(const std::vector<GraphViolation>& vs, const std::string& code, const std::string& subject,
         const std::string& detail = "") {
  return std::any_of(vs.begin(), vs.end(), [&](const GraphViolation& v) {
    return v.code == code && v.subject == subject && (detail.empty() || v.detail == detail);
  });
}

double seconds_of(const EdgeRecord& e, const char* name) { return e.prop(name)->as_datetime().seconds; }

}  // namespace

TEST(BuildGraph, DefaultRunCounts) {
  const auto log = default_log();
  const auto g = build_graph(log);
  std::set<std::string> ids;
  for (const auto& p : log.packages) {
    ids.insert("W" + p.worker_id);
    ids.insert("A" + p.agv_id);
    ids.insert("F" + p.forklift_id);
    ids.insert("S" + p.block_id);
  }
  EXPECT_EQ(g.node_count(), ids.size() + log.supplier_records.size());
  EXPECT_EQ(g.node_count(), 47u);
  EXPECT_EQ(g.edge_count(), 4 * log.packages.size());
  EXPECT_EQ(g.nodes_with_label(Label::Agv).size(), 20u);
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(BuildGraph, EmptyLogGivesEmptyGraph) {
  sim::SimConfig c;
  c.suppliers.clear();
  const auto g = build_graph(sim::run_simulation(c));
  EXPECT_TRUE(g.empty());
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(BuildGraph, EdgeTimestampsEqualTraces) {
  const auto log = default_log(3);
  const auto g = build_graph(log);
  for (const auto& p : log.packages) {
    const auto* quad = g.package_edges(p.package_id);
    ASSERT_NE(quad, nullptr);
    const auto& stw = g.edge((*quad)[0]);
    const auto& wta = g.edge((*quad)[1]);
    const auto& atf = g.edge((*quad)[2]);
    const auto& fts = g.edge((*quad)[3]);
    EXPECT_EQ(seconds_of(stw, "worker_pick_up_start"), p.worker_pick_up_start);
    EXPECT_EQ(seconds_of(wta, "worker_pick_up_end"), p.worker_pick_up_end);
    EXPECT_EQ(seconds_of(wta, "agv_arrival"), p.agv_arrival);
    EXPECT_EQ(seconds_of(wta, "agv_journey_start"), p.agv_journey_start);
    EXPECT_EQ(seconds_of(atf, "agv_journey_end"), p.agv_journey_end);
    EXPECT_EQ(seconds_of(atf, "fl_placement_start"), p.fl_placement_start);
    EXPECT_EQ(seconds_of(fts, "fl_placement_end"), p.fl_placement_end);
    EXPECT_EQ(stw.src.key, p.supplier_id);
    EXPECT_EQ(wta.dst.key, p.agv_id);
    EXPECT_EQ(fts.dst.key, p.block_id);
    EXPECT_EQ(fts.prop("bay")->as_int(), p.bay);
  }
  const auto& sup = g.node(*g.find_node(Label::Supplier, "CamelCargo"));
  EXPECT_EQ(sup.prop("discharge_end")->as_datetime().seconds, log.supplier("CamelCargo")->discharge_end);
}

TEST(BuildGraph, InvalidLogRaisesValidationFailed) {
  auto log = default_log();
  log.packages[5].agv_journey_end = log.packages[5].agv_journey_start - 1.0;
  try {
    build_graph(log);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
    EXPECT_NE(e.detail().find("NON_MONOTONE(" + log.packages[5].package_id), std::string::npos);
  }
}

TEST(ValidateGraph, MissingEdge) {
  const auto g = build_graph(default_log());
  auto edges = g.edges();
  auto it = std::find_if(edges.begin(), edges.end(), [](const EdgeRecord& e) {
    return e.type == EdgeType::FlToStorage && e.package_id() == "PKG_0010";
  });
  ASSERT_NE(it, edges.end());
  edges.erase(it);
  auto vs = validate_graph(PropertyGraph(g.nodes(), edges));
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(to_string(vs[0]), "MISSING_EDGE(PKG_0010, FL_TO_STORAGE)");
}

TEST(ValidateGraph, NonMonotoneJourney) {
  const auto g = build_graph(default_log());
  auto edges = g.edges();
  for (auto& e : edges)
    if (e.type == EdgeType::AgvToFl && e.package_id() == "PKG_0042")
      e.props["agv_journey_end"] = DateTime{0.5};
  auto vs = validate_graph(PropertyGraph(g.nodes(), edges));
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_TRUE(has(vs, "NON_MONOTONE", "PKG_0042"));
}

TEST(ValidateGraph, DanglingAndDuplicate) {
  const auto g = build_graph(default_log());
  auto edges = g.edges();
  auto nodes = g.nodes();
  edges[0].dst.key = "BW_99";
  edges.push_back(edges[7]);
  nodes.push_back(nodes[0]);
  auto vs = validate_graph(PropertyGraph(nodes, edges));
  EXPECT_TRUE(has(vs, "DANGLING_EDGE", edges[0].package_id(), "WORKER:BW_99"));
  EXPECT_TRUE(has(vs, "DUPLICATE_EDGE", edges[7].package_id()));
  EXPECT_TRUE(has(vs, "DUPLICATE_NODE", to_string(nodes[0].node_key())));
}

TEST(ValidateGraph, NegativeDateTime) {
  const auto g = build_graph(default_log());
  auto nodes = g.nodes();
  nodes[0].props["arrival_time"] = DateTime{-1.0};
  auto vs = validate_graph(PropertyGraph(nodes, g.edges()));
  EXPECT_TRUE(has(vs, "BAD_DATETIME", to_string(nodes[0].node_key()), "arrival_time"));
}

TEST(Indexes, EqualLinearScan) {
  const auto g = build_graph(default_log(9));
  for (Label l : kAllLabels) {
    std::vector<std::string> scan;
    for (const auto& n : g.nodes())
      if (n.label == l) scan.push_back(n.key);
    std::sort(scan.begin(), scan.end());
    EXPECT_EQ(g.keys(l), scan);
  }
  for (EdgeType t : kAllEdgeTypes) {
    std::vector<std::size_t> scan;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).type == t) scan.push_back(e);
    EXPECT_EQ(g.edges_of_type(t), scan);
  }
  std::mt19937_64 rng(1);
  const auto pkgs = g.package_ids();
  for (int i = 0; i < 40; ++i) {
    const auto& pkg = pkgs[rng() % pkgs.size()];
    const auto* quad = g.package_edges(pkg);
    ASSERT_NE(quad, nullptr);
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).package_id() == pkg) {
        EXPECT_EQ((*quad)[static_cast<std::size_t>(g.edge(e).type)], e);
      }
  }
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    std::size_t out = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) out += g.source(e) == n;
    EXPECT_EQ(g.out_edges(n).size(), out);
  }
  EXPECT_EQ(g.package_edges("PKG_9999"), nullptr);
}

TEST(GraphIo, JsonlRoundTrip) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto g = build_graph(default_log(seed));
    const auto text = export_graph(g, GraphFormat::Jsonl);
    const auto back = import_graph(text);
    EXPECT_EQ(back.canonical(), g.canonical());
    EXPECT_EQ(export_graph(back, GraphFormat::Jsonl), text);
  }
}

TEST(GraphIo, EmptyGraphIsHeaderOnly) {
  const auto text = export_graph(PropertyGraph{}, GraphFormat::Jsonl);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_TRUE(import_graph(text).empty());
}

TEST(GraphIo, CypherScriptHasOneCreatePerNode) {
  const auto g = build_graph(default_log());
  const auto script = export_graph(g, GraphFormat::CypherScript);
  std::istringstream in(script);
  std::string line;
  const std::regex node_create(R"(^CREATE \(:[A-Z]+ \{.*\}\);$)");
  int nodes = 0, edges = 0;
  while (std::getline(in, line)) {
    if (std::regex_match(line, node_create)) ++nodes;
    if (line.rfind("MATCH ", 0) == 0) ++edges;
  }
  EXPECT_EQ(nodes, 47);
  EXPECT_EQ(static_cast<std::size_t>(edges), g.edge_count());
  EXPECT_NE(script.find("datetime('2024-01-01T"), std::string::npos);
}

TEST(GraphIo, TruncatedStream) {
  const auto text = export_graph(build_graph(default_log()), GraphFormat::Jsonl);
  std::size_t cut = 0;
  for (int i = 0; i < 30; ++i) cut = text.find('\n', cut) + 1;
  try {
    import_graph(text.substr(0, cut + 15));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    EXPECT_NE(e.detail().find("line 31"), std::string::npos) << e.detail();
  }
  try {
    import_graph(text.substr(0, cut));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
  }
}

TEST(GraphIo, DanglingEdgeFailsValidation) {
  auto text = export_graph(build_graph(default_log()), GraphFormat::Jsonl);
  auto pos = text.find(R"("key":"BW_03")", text.find(R"("kind":"edge")"));
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 13, R"("key":"BW_77")");
  try {
    import_graph(text);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
  }
}

TEST(Value, OrderingAndDisplay) {
  EXPECT_EQ(compare(Value(1), Value(1.0)), 0);
  EXPECT_LT(compare(Value(1), Value(1.5)), 0);
  EXPECT_LT(compare(Value("a"), Value("b")), 0);
  EXPECT_GT(compare(Value(), Value(3)), 0);
  EXPECT_EQ(to_display(Value(List{1, "x", nullptr})), "[1, x, null]");
}
