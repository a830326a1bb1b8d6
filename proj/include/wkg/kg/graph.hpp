#pragma once
// In-memory property graph: resource nodes connected by one edge per package
// per stage transition.
//
//   SUPPLIER -[SUPPLIER_TO_WORKER]-> WORKER -[WORKER_TO_AGV]-> AGV
//            -[AGV_TO_FL]-> FL -[FL_TO_STORAGE]-> STORAGE
//
// A graph is immutable once constructed. The constructor builds the lookup
// indexes but does not validate; use validate_graph for that.

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "wkg/error.hpp"
#include "wkg/kg/value.hpp"
#include "wkg/time.hpp"

namespace wkg::kg {

enum class Label { Supplier, Worker, Agv, Fl, Storage };
enum class EdgeType { SupplierToWorker, WorkerToAgv, AgvToFl, FlToStorage };

inline constexpr std::array<Label, 5> kAllLabels{Label::Supplier, Label::Worker, Label::Agv,
                                                 Label::Fl, Label::Storage};
inline constexpr std::array<EdgeType, 4> kAllEdgeTypes{
    EdgeType::SupplierToWorker, EdgeType::WorkerToAgv, EdgeType::AgvToFl, EdgeType::FlToStorage};

inline constexpr std::string_view label_name(Label l) {
  switch (l) {
    case Label::Supplier: return "SUPPLIER";
    case Label::Worker: return "WORKER";
    case Label::Agv: return "AGV";
    case Label::Fl: return "FL";
    case Label::Storage: return "STORAGE";
  }
  return "?";
}

// Property holding the node key.
inline constexpr std::string_view key_property(Label l) {
  switch (l) {
    case Label::Supplier: return "supplier_id";
    case Label::Worker: return "worker_id";
    case Label::Agv: return "agv_id";
    case Label::Fl: return "forklift_id";
    case Label::Storage: return "block_id";
  }
  return "?";
}

inline constexpr std::string_view edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::SupplierToWorker: return "SUPPLIER_TO_WORKER";
    case EdgeType::WorkerToAgv: return "WORKER_TO_AGV";
    case EdgeType::AgvToFl: return "AGV_TO_FL";
    case EdgeType::FlToStorage: return "FL_TO_STORAGE";
  }
  return "?";
}

inline std::optional<Label> parse_label(std::string_view s) {
  for (Label l : kAllLabels)
    if (label_name(l) == s) return l;
  return std::nullopt;
}

inline std::optional<EdgeType> parse_edge_type(std::string_view s) {
  for (EdgeType t : kAllEdgeTypes)
    if (edge_type_name(t) == s) return t;
  return std::nullopt;
}

inline constexpr std::pair<Label, Label> endpoints(EdgeType t) {
  switch (t) {
    case EdgeType::SupplierToWorker: return {Label::Supplier, Label::Worker};
    case EdgeType::WorkerToAgv: return {Label::Worker, Label::Agv};
    case EdgeType::AgvToFl: return {Label::Agv, Label::Fl};
    case EdgeType::FlToStorage: return {Label::Fl, Label::Storage};
  }
  return {Label::Supplier, Label::Worker};
}

// Timestamp properties each edge type must carry, besides package_id.
inline std::vector<std::string_view> required_edge_times(EdgeType t) {
  switch (t) {
    case EdgeType::SupplierToWorker: return {"worker_pick_up_start"};
    case EdgeType::WorkerToAgv: return {"agv_arrival", "agv_journey_start", "worker_pick_up_end"};
    case EdgeType::AgvToFl: return {"agv_journey_end", "fl_placement_start"};
    case EdgeType::FlToStorage: return {"fl_placement_end"};
  }
  return {};
}

inline constexpr std::array<std::string_view, 3> kSupplierTimes{"arrival_time", "discharge_start",
                                                                "discharge_end"};

using Props = std::map<std::string, Value>;

struct NodeKey {
  Label label = Label::Supplier;
  std::string key;
  auto operator<=>(const NodeKey&) const = default;
};

inline std::string to_string(const NodeKey& k) {
  return std::string(label_name(k.label)) + ":" + k.key;
}

struct NodeRecord {
  Label label = Label::Supplier;
  std::string key;
  Props props;

  NodeKey node_key() const { return {label, key}; }
  const Value* prop(const std::string& name) const {
    auto it = props.find(name);
    return it == props.end() ? nullptr : &it->second;
  }
  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
  EdgeType type = EdgeType::SupplierToWorker;
  NodeKey src;
  NodeKey dst;
  Props props;

  const Value* prop(const std::string& name) const {
    auto it = props.find(name);
    return it == props.end() ? nullptr : &it->second;
  }
  std::string package_id() const {
    const Value* v = prop("package_id");
    return v && v->kind() == Value::Kind::Text ? v->as_text() : std::string();
  }
  bool operator==(const EdgeRecord&) const = default;
};

class PropertyGraph {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  using Quad = std::array<std::size_t, 4>;  // indexed by EdgeType, npos when absent

  PropertyGraph() = default;
  PropertyGraph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                std::string epoch = std::string(kDefaultEpoch))
      : nodes_(std::move(nodes)), edges_(std::move(edges)), epoch_(std::move(epoch)) {
    index();
  }

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const NodeRecord& node(std::size_t i) const { return nodes_[i]; }
  const EdgeRecord& edge(std::size_t i) const { return edges_[i]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty() && edges_.empty(); }
  const std::string& epoch() const { return epoch_; }

  std::optional<std::size_t> find_node(Label label, const std::string& key) const {
    auto it = by_key_.find(NodeKey{label, key});
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  // Node indexes of one label, ordered by key.
  const std::vector<std::size_t>& nodes_with_label(Label l) const {
    return by_label_[static_cast<std::size_t>(l)];
  }
  std::vector<std::string> keys(Label l) const {
    std::vector<std::string> out;
    for (std::size_t i : nodes_with_label(l)) out.push_back(nodes_[i].key);
    return out;
  }

  // Edge indexes of one type, in insertion order.
  const std::vector<std::size_t>& edges_of_type(EdgeType t) const {
    return by_type_[static_cast<std::size_t>(t)];
  }

  const std::vector<std::size_t>& out_edges(std::size_t node) const { return out_[node]; }
  const std::vector<std::size_t>& in_edges(std::size_t node) const { return in_[node]; }

  // Resolved endpoints; npos for a dangling reference.
  std::size_t source(std::size_t edge) const { return src_[edge]; }
  std::size_t target(std::size_t edge) const { return dst_[edge]; }

  const Quad* package_edges(const std::string& package_id) const {
    auto it = by_package_.find(package_id);
    return it == by_package_.end() ? nullptr : &it->second;
  }
  std::vector<std::string> package_ids() const {
    std::vector<std::string> out;
    out.reserve(by_package_.size());
    for (const auto& [id, q] : by_package_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Same content with nodes ordered by (label, key) and edges by
  // (type, package_id). Equality of canonical forms is graph equality.
  PropertyGraph canonical() const {
    auto nodes = nodes_;
    auto edges = edges_;
    std::stable_sort(nodes.begin(), nodes.end(), [](const NodeRecord& a, const NodeRecord& b) {
      return a.node_key() < b.node_key();
    });
    std::stable_sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
      return std::make_tuple(a.type, a.package_id(), a.src, a.dst) <
             std::make_tuple(b.type, b.package_id(), b.src, b.dst);
    });
    return PropertyGraph(std::move(nodes), std::move(edges), epoch_);
  }

  bool operator==(const PropertyGraph& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  void index() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      by_key_.emplace(nodes_[i].node_key(), i);
      by_label_[static_cast<std::size_t>(nodes_[i].label)].push_back(i);
    }
    for (auto& v : by_label_)
      std::stable_sort(v.begin(), v.end(),
                       [&](std::size_t a, std::size_t b) { return nodes_[a].key < nodes_[b].key; });
    out_.assign(nodes_.size(), {});
    in_.assign(nodes_.size(), {});
    src_.assign(edges_.size(), npos);
    dst_.assign(edges_.size(), npos);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& rec = edges_[e];
      by_type_[static_cast<std::size_t>(rec.type)].push_back(e);
      if (auto s = by_key_.find(rec.src); s != by_key_.end()) {
        src_[e] = s->second;
        out_[s->second].push_back(e);
      }
      if (auto d = by_key_.find(rec.dst); d != by_key_.end()) {
        dst_[e] = d->second;
        in_[d->second].push_back(e);
      }
      auto pkg = rec.package_id();
      if (!pkg.empty()) {
        auto [it, fresh] = by_package_.try_emplace(pkg);
        if (fresh) it->second.fill(npos);
        auto& slot = it->second[static_cast<std::size_t>(rec.type)];
        if (slot == npos) slot = e;
      }
    }
  }

  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::string epoch_{kDefaultEpoch};

  std::map<NodeKey, std::size_t> by_key_;
  std::array<std::vector<std::size_t>, 5> by_label_;
  std::array<std::vector<std::size_t>, 4> by_type_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> src_;
  std::vector<std::size_t> dst_;
  std::unordered_map<std::string, Quad> by_package_;
};

}  // namespace wkg::kg
