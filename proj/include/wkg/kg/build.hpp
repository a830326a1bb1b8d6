#pragma once
// EventLog -> PropertyGraph construction and integrity checks.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "wkg/error.hpp"
#include "wkg/kg/graph.hpp"
#include "wkg/sim/event_log.hpp"

namespace wkg::kg {

struct GraphViolation {
  std::string code;     // DANGLING_EDGE, MISSING_EDGE, NON_MONOTONE, ...
  std::string subject;  // package id, node key or edge description
  std::string detail;
  bool operator==(const GraphViolation&) const = default;
};

inline std::string to_string(const GraphViolation& v) {
  std::string out = v.code + "(" + v.subject;
  if (!v.detail.empty()) out += ", " + v.detail;
  return out + ")";
}

inline std::string describe(const std::vector<GraphViolation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += to_string(v);
  }
  return out;
}

namespace detail {

inline bool valid_datetime(const Value& v) {
  return v.kind() == Value::Kind::DateTime && std::isfinite(v.as_datetime().seconds) &&
         v.as_datetime().seconds >= 0.0;
}

inline void check_props(const Props& props, const std::vector<std::string_view>& names,
                        const std::string& subject, std::vector<GraphViolation>& out) {
  for (auto name : names) {
    auto it = props.find(std::string(name));
    if (it == props.end())
      out.push_back({"MISSING_PROPERTY", subject, std::string(name)});
    else if (!valid_datetime(it->second))
      out.push_back({"BAD_DATETIME", subject, std::string(name)});
  }
}

inline std::optional<double> time_of(const PropertyGraph& g, std::size_t edge, const char* name) {
  if (edge == PropertyGraph::npos) return std::nullopt;
  const Value* v = g.edge(edge).prop(name);
  if (!v || v->kind() != Value::Kind::DateTime) return std::nullopt;
  return v->as_datetime().seconds;
}

}  // namespace detail

// Reports every integrity problem found; never throws.
inline std::vector<GraphViolation> validate_graph(const PropertyGraph& g) {
  std::vector<GraphViolation> out;

  std::set<NodeKey> seen;
  for (const auto& n : g.nodes()) {
    const std::string subject = to_string(n.node_key());
    if (!seen.insert(n.node_key()).second) out.push_back({"DUPLICATE_NODE", subject, ""});
    const Value* key = n.prop(std::string(key_property(n.label)));
    if (!key || key->kind() != Value::Kind::Text || key->as_text() != n.key)
      out.push_back({"MISSING_PROPERTY", subject, std::string(key_property(n.label))});
    if (n.label == Label::Supplier)
      detail::check_props(n.props, {kSupplierTimes.begin(), kSupplierTimes.end()}, subject, out);
  }

  std::map<std::string, std::array<int, 4>> per_package;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& rec = g.edge(e);
    const std::string pkg = rec.package_id();
    const std::string subject =
        pkg.empty() ? std::string(edge_type_name(rec.type)) + "#" + std::to_string(e) : pkg;
    if (g.source(e) == PropertyGraph::npos)
      out.push_back({"DANGLING_EDGE", subject, to_string(rec.src)});
    if (g.target(e) == PropertyGraph::npos)
      out.push_back({"DANGLING_EDGE", subject, to_string(rec.dst)});
    auto [src_label, dst_label] = endpoints(rec.type);
    if (rec.src.label != src_label || rec.dst.label != dst_label)
      out.push_back({"BAD_ENDPOINT", subject, std::string(edge_type_name(rec.type))});
    if (pkg.empty()) {
      out.push_back({"MISSING_PROPERTY", subject, "package_id"});
      continue;
    }
    detail::check_props(rec.props, required_edge_times(rec.type), subject, out);
    auto [it, fresh] = per_package.try_emplace(pkg);
    if (fresh) it->second.fill(0);
    ++it->second[static_cast<std::size_t>(rec.type)];
  }

  for (const auto& [pkg, counts] : per_package) {
    for (EdgeType t : kAllEdgeTypes) {
      int c = counts[static_cast<std::size_t>(t)];
      if (c == 0) out.push_back({"MISSING_EDGE", pkg, std::string(edge_type_name(t))});
      if (c > 1) out.push_back({"DUPLICATE_EDGE", pkg, std::string(edge_type_name(t))});
    }
    const auto* quad = g.package_edges(pkg);
    if (!quad) continue;
    using E = EdgeType;
    auto at = [&](E t) { return (*quad)[static_cast<std::size_t>(t)]; };
    const std::optional<double> chain[] = {
        detail::time_of(g, at(E::SupplierToWorker), "worker_pick_up_start"),
        detail::time_of(g, at(E::WorkerToAgv), "worker_pick_up_end"),
        detail::time_of(g, at(E::WorkerToAgv), "agv_journey_start"),
        detail::time_of(g, at(E::AgvToFl), "agv_journey_end"),
        detail::time_of(g, at(E::AgvToFl), "fl_placement_start"),
        detail::time_of(g, at(E::FlToStorage), "fl_placement_end")};
    for (std::size_t i = 1; i < std::size(chain); ++i)
      if (chain[i - 1] && chain[i] && *chain[i] < *chain[i - 1]) {
        out.push_back({"NON_MONOTONE", pkg, ""});
        break;
      }
  }
  return out;
}

inline Value datetime(double seconds) { return DateTime{seconds}; }

// Five steps: temporal extraction, resource nodes, package-flow edges,
// integrity validation, index construction.
inline PropertyGraph build_graph(const sim::EventLog& log,
                                 std::string epoch = std::string(kDefaultEpoch)) {
  // (1) temporal extraction: every timestamp becomes a DateTime value.
  struct Flow {
    const sim::PackageTrace* trace;
    std::array<Props, 4> props;
  };
  std::vector<Flow> flows;
  flows.reserve(log.packages.size());
  for (const auto& p : log.packages) {
    Flow f{&p, {}};
    f.props[0] = {{"package_id", p.package_id},
                  {"worker_pick_up_start", datetime(p.worker_pick_up_start)}};
    f.props[1] = {{"package_id", p.package_id},
                  {"agv_arrival", datetime(p.agv_arrival)},
                  {"agv_journey_start", datetime(p.agv_journey_start)},
                  {"worker_pick_up_end", datetime(p.worker_pick_up_end)}};
    f.props[2] = {{"package_id", p.package_id},
                  {"agv_journey_end", datetime(p.agv_journey_end)},
                  {"fl_placement_start", datetime(p.fl_placement_start)}};
    f.props[3] = {{"package_id", p.package_id},
                  {"fl_placement_end", datetime(p.fl_placement_end)},
                  {"bay", p.bay},
                  {"shelf", p.shelf}};
    flows.push_back(std::move(f));
  }

  // (2) resource nodes, one per distinct id.
  std::vector<NodeRecord> nodes;
  for (const auto& s : log.supplier_records)
    nodes.push_back({Label::Supplier,
                     s.supplier_id,
                     {{"supplier_id", s.supplier_id},
                      {"arrival_time", datetime(s.arrival_time)},
                      {"discharge_start", datetime(s.discharge_start)},
                      {"discharge_end", datetime(s.discharge_end)}}});
  std::array<std::set<std::string>, 4> resources;
  for (const auto& p : log.packages) {
    resources[0].insert(p.worker_id);
    resources[1].insert(p.agv_id);
    resources[2].insert(p.forklift_id);
    resources[3].insert(p.block_id);
  }
  const Label resource_labels[] = {Label::Worker, Label::Agv, Label::Fl, Label::Storage};
  for (std::size_t r = 0; r < 4; ++r)
    for (const auto& id : resources[r])
      nodes.push_back({resource_labels[r], id, {{std::string(key_property(resource_labels[r])), id}}});

  // (3) package-flow edges.
  std::vector<EdgeRecord> edges;
  edges.reserve(4 * flows.size());
  for (auto& f : flows) {
    const auto& p = *f.trace;
    edges.push_back({EdgeType::SupplierToWorker, {Label::Supplier, p.supplier_id},
                     {Label::Worker, p.worker_id}, std::move(f.props[0])});
    edges.push_back({EdgeType::WorkerToAgv, {Label::Worker, p.worker_id}, {Label::Agv, p.agv_id},
                     std::move(f.props[1])});
    edges.push_back({EdgeType::AgvToFl, {Label::Agv, p.agv_id}, {Label::Fl, p.forklift_id},
                     std::move(f.props[2])});
    edges.push_back({EdgeType::FlToStorage, {Label::Fl, p.forklift_id},
                     {Label::Storage, p.block_id}, std::move(f.props[3])});
  }

  // (4) integrity validation and (5) indexes, both on the constructed graph.
  PropertyGraph graph(std::move(nodes), std::move(edges), std::move(epoch));
  if (auto vs = validate_graph(graph); !vs.empty())
    throw Error(ErrorCode::ValidationFailed, describe(vs));
  return graph;
}

}  // namespace wkg::kg
