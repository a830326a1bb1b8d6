#pragma once
// The canonical operational questions and their reference answers, computed
// from the EventLog alone.
//
// Answers are JSON objects. Ranked answers break ties by the smaller id; hours
// are integer hours since the simulation epoch, used as string keys in maps.

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/analytics/oracle.hpp"
#include "wkg/error.hpp"

namespace wkg::analytics {

struct CanonicalQuestion {
  std::string id;
  std::string category;  // SUPPLIER, WORKER, AGV, FORKLIFT, PACKAGE
  std::string text;
};

inline const std::vector<CanonicalQuestion>& canonical_questions() {
  static const std::vector<CanonicalQuestion> qs{
      {"S1", "SUPPLIER", "What is the number of discharge processes that are completed on an hourly basis?"},
      {"S2", "SUPPLIER",
       "Where and how many containers discharged from supplier DeltaDrops distributed in each block in the storage?"},
      {"S3", "SUPPLIER", "Which supplier had the shortest total discharge time and how many packages were moved?"},
      {"S4", "SUPPLIER",
       "What is the average waiting time for a supplier truck before unloading begins? Which truck waited the most?"},
      {"S5", "SUPPLIER", "Which hour had the most total waiting time during package unload?"},
      {"W1", "WORKER", "For each person, what was the total number of packages they handled during a shift?"},
      {"W2", "WORKER",
       "What is the average time taken by a person to move a package from truck to AGV? Who is the most efficient "
       "person?"},
      {"W3", "WORKER", "How much time does each worker take to unload all packages from supplier DeltaDrops?"},
      {"W4", "WORKER", "How many workers were used to unload packages from supplier CamelCargo?"},
      {"W5", "WORKER", "Which workers were assigned to most number of suppliers?"},
      {"A1", "AGV", "Which three AGVs processed the least amount of packages?"},
      {"A2", "AGV",
       "What is the average travel time for an AGV to move a package from the dock to its assigned storage area?"},
      {"A3", "AGV", "How many trips does each agv make during unloading along with the average journey time?"},
      {"A4", "AGV", "How many packages did AGV 04 handle from each supplier?"},
      {"A5", "AGV", "Which AGV was the least utilized?"},
      {"F1", "FORKLIFT", "Which package waited the longest for a fork lift?"},
      {"F2", "FORKLIFT", "How many packages are handled by each forklift?"},
      {"F3", "FORKLIFT", "Which forklift is the most under utilized?"},
      {"F4", "FORKLIFT",
       "What is the average time taken by a forklift to move a package to its assigned storage space?"},
      {"F5", "FORKLIFT", "What is the utilization rate (percentage of time in use) for each forklift?"},
      {"P1", "PACKAGE", "Which storage block contains the highest number of containers?"},
      {"P2", "PACKAGE", "What is the average time a package discharge takes?"},
      {"P3", "PACKAGE",
       "What is the average waiting time for a package to be transferred to a forklift after AGV arrival at the "
       "storage area?"},
      {"P4", "PACKAGE",
       "Which package experienced the longest total time from arrival at the dock to placement in its final storage "
       "location?"},
      {"P5", "PACKAGE",
       "How many packages took longer than the average unload time and what is the average discharge time?"},
      {"P6", "PACKAGE", "Which packages were handled by both AGV 10 and forklift 00?"},
  };
  return qs;
}

inline const CanonicalQuestion& canonical_question(const std::string& id) {
  for (const auto& q : canonical_questions())
    if (q.id == id) return q;
  throw Error(ErrorCode::UnknownQuestion, id);
}

namespace detail {

inline nlohmann::json opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

inline std::string hour_key(double seconds) {
  return std::to_string(static_cast<std::int64_t>(std::trunc(seconds / 3600.0)));
}

// Aggregated floating-point values depend on summation order in their last
// bits, so rankings over them compare values rounded to 9 decimals.
inline double rank_round(double x) { return std::round(x * 1e9) / 1e9; }

// Smallest (or largest) value, earliest key on ties. `m` iterates in key order.
template <typename Map, typename Key = std::identity>
auto pick(const Map& m, bool smallest, Key key = {}) {
  auto best = m.end();
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (best == m.end()) {
      best = it;
      continue;
    }
    const auto a = key(it->second), b = key(best->second);
    if (smallest ? a < b : a > b) best = it;
  }
  return best;
}

struct Mean {
  double sum = 0.0;
  std::int64_t n = 0;
  void add(double x) { sum += x, ++n; }
  std::optional<double> value() const {
    return n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt;
  }
};

inline double discharge_start_of(const EventLog& log, const PackageTrace& p) {
  const auto* s = log.supplier(p.supplier_id);
  if (!s) throw Error(ErrorCode::IncompleteTrace, p.package_id + ": no record for supplier " + p.supplier_id);
  return s->discharge_start;
}

// Busy seconds / active span per resource, over the resources seen in packages.
inline std::map<std::string, std::optional<double>> utilization(const EventLog& log, ResourceClass cls) {
  std::map<std::string, std::array<double, 3>> acc;  // first, last, busy
  for (const auto& p : log.packages) {
    const auto iv = sim::busy_interval(p, cls);
    auto [it, fresh] = acc.try_emplace(sim::resource_of(p, cls), std::array<double, 3>{iv.start, iv.end, 0.0});
    auto& a = it->second;
    a[0] = std::min(a[0], iv.start);
    a[1] = std::max(a[1], iv.end);
    a[2] += iv.end - iv.start;
  }
  std::map<std::string, std::optional<double>> out;
  for (const auto& [id, a] : acc) {
    const double span = a[1] - a[0];
    out[id] = span > 0.0 ? std::optional<double>(a[2] / span) : std::nullopt;
  }
  return out;
}

inline nlohmann::json least_utilized(const EventLog& log, ResourceClass cls, const char* id_key) {
  std::map<std::string, double> known;
  for (const auto& [id, u] : utilization(log, cls))
    if (u) known[id] = *u;
  auto it = pick(known, true, rank_round);
  if (it == known.end()) return {{id_key, nullptr}, {"utilization", nullptr}};
  return {{id_key, it->first}, {"utilization", it->second}};
}

}  // namespace detail

inline nlohmann::json answer_canonical(const std::string& id, const EventLog& log) {
  using namespace detail;
  using nlohmann::json;
  canonical_question(id);
  const auto& P = log.packages;

  if (id == "S1") {
    json m = json::object();
    std::map<std::string, std::int64_t> n;
    for (const auto& s : log.supplier_records) ++n[hour_key(s.discharge_end)];
    for (const auto& [h, c] : n) m[h] = c;
    return m;
  }
  if (id == "S2" || id == "W3" || id == "A4") {
    json m = json::object();
    if (id == "S2") {
      std::map<std::string, std::int64_t> n;
      for (const auto& p : P)
        if (p.supplier_id == "DeltaDrops") ++n[p.block_id];
      for (const auto& [k, c] : n) m[k] = c;
    } else if (id == "W3") {
      std::map<std::string, double> t;
      for (const auto& p : P)
        if (p.supplier_id == "DeltaDrops") t[p.worker_id] += p.worker_pick_up_end - p.worker_pick_up_start;
      for (const auto& [k, v] : t) m[k] = v;
    } else {
      std::map<std::string, std::int64_t> n;
      for (const auto& p : P)
        if (p.agv_id == "AGV_04") ++n[p.supplier_id];
      for (const auto& [k, c] : n) m[k] = c;
    }
    return m;
  }
  if (id == "S3") {
    std::map<std::string, double> last;
    std::map<std::string, std::int64_t> count;
    for (const auto& p : P) {
      auto [it, fresh] = last.try_emplace(p.supplier_id, p.fl_placement_end);
      if (!fresh) it->second = std::max(it->second, p.fl_placement_end);
      ++count[p.supplier_id];
    }
    std::map<std::string, double> total;
    for (const auto& [s, end] : last) total[s] = end - log.supplier(s)->discharge_start;
    auto it = pick(total, true);
    if (it == total.end()) return {{"supplier_id", nullptr}, {"total_discharge_seconds", nullptr}, {"packages", 0}};
    return {{"supplier_id", it->first}, {"total_discharge_seconds", it->second}, {"packages", count[it->first]}};
  }
  if (id == "S4") {
    std::map<std::string, double> wait;
    Mean mean;
    for (const auto& s : log.supplier_records) {
      wait[s.supplier_id] = s.discharge_start - s.arrival_time;
      mean.add(s.discharge_start - s.arrival_time);
    }
    auto it = pick(wait, false);
    return {{"average_wait_seconds", opt(mean.value())},
            {"supplier_id", it == wait.end() ? json(nullptr) : json(it->first)},
            {"max_wait_seconds", it == wait.end() ? json(nullptr) : json(it->second)}};
  }
  if (id == "S5") {
    std::map<std::int64_t, double> by_hour;
    for (const auto& p : P)
      by_hour[static_cast<std::int64_t>(std::trunc(p.worker_pick_up_start / 3600.0))] +=
          p.worker_pick_up_start - discharge_start_of(log, p);
    auto it = pick(by_hour, false, rank_round);
    if (it == by_hour.end()) return {{"hour", nullptr}, {"total_wait_seconds", nullptr}};
    return {{"hour", it->first}, {"total_wait_seconds", it->second}};
  }
  if (id == "W1" || id == "F2") {
    std::map<std::string, std::int64_t> n;
    for (const auto& p : P) ++n[id == "W1" ? p.worker_id : p.forklift_id];
    json m = json::object();
    for (const auto& [k, c] : n) m[k] = c;
    return m;
  }
  if (id == "W2") {
    std::map<std::string, Mean> per;
    Mean all;
    for (const auto& p : P) {
      per[p.worker_id].add(p.worker_pick_up_end - p.worker_pick_up_start);
      all.add(p.worker_pick_up_end - p.worker_pick_up_start);
    }
    std::map<std::string, double> means;
    for (const auto& [w, m] : per) means[w] = *m.value();
    auto it = pick(means, true, rank_round);
    return {{"average_carry_seconds", opt(all.value())},
            {"worker_id", it == means.end() ? json(nullptr) : json(it->first)},
            {"worker_avg_carry_seconds", it == means.end() ? json(nullptr) : json(it->second)}};
  }
  if (id == "W4") {
    std::set<std::string> ws;
    for (const auto& p : P)
      if (p.supplier_id == "CamelCargo") ws.insert(p.worker_id);
    return {{"workers", ws.size()}};
  }
  if (id == "W5") {
    std::map<std::string, std::set<std::string>> sup;
    for (const auto& p : P) sup[p.worker_id].insert(p.supplier_id);
    std::size_t best = 0;
    for (const auto& [w, s] : sup) best = std::max(best, s.size());
    json ids = json::array();
    for (const auto& [w, s] : sup)
      if (s.size() == best) ids.push_back(w);
    return {{"worker_ids", ids}, {"supplier_count", sup.empty() ? json(nullptr) : json(best)}};
  }
  if (id == "A1") {
    std::map<std::string, std::int64_t> n;
    for (const auto& p : P) ++n[p.agv_id];
    std::vector<std::pair<std::int64_t, std::string>> ranked;
    for (const auto& [a, c] : n) ranked.emplace_back(c, a);
    std::sort(ranked.begin(), ranked.end());
    json rows = json::array();
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
      rows.push_back({{"agv_id", ranked[i].second}, {"packages", ranked[i].first}});
    return {{"agvs", rows}};
  }
  if (id == "A2" || id == "F4" || id == "P2" || id == "P3") {
    Mean m;
    for (const auto& p : P) {
      if (id == "A2") m.add(p.agv_journey_end - p.agv_journey_start);
      if (id == "F4") m.add(p.fl_placement_end - p.fl_placement_start);
      if (id == "P2") m.add(p.fl_placement_end - p.worker_pick_up_start);
      if (id == "P3") m.add(p.fl_placement_start - p.agv_journey_end);
    }
    const char* key = id == "A2"   ? "average_journey_seconds"
                      : id == "F4" ? "average_placement_seconds"
                      : id == "P2" ? "average_discharge_seconds"
                                   : "average_wait_seconds";
    return {{key, opt(m.value())}};
  }
  if (id == "A3") {
    std::map<std::string, Mean> per;
    for (const auto& p : P) per[p.agv_id].add(p.agv_journey_end - p.agv_journey_start);
    json m = json::object();
    for (const auto& [a, mean] : per) m[a] = {{"trips", mean.n}, {"average_journey_seconds", *mean.value()}};
    return m;
  }
  if (id == "A5") return least_utilized(log, ResourceClass::Agv, "agv_id");
  if (id == "F3") return least_utilized(log, ResourceClass::Forklift, "forklift_id");
  if (id == "F1" || id == "P4") {
    std::map<std::string, double> v;
    for (const auto& p : P)
      v[p.package_id] = id == "F1" ? p.fl_placement_start - p.agv_journey_end
                                   : p.fl_placement_end - discharge_start_of(log, p);
    auto it = pick(v, false);
    const char* key = id == "F1" ? "wait_seconds" : "total_seconds";
    if (it == v.end()) return {{"package_id", nullptr}, {key, nullptr}};
    return {{"package_id", it->first}, {key, it->second}};
  }
  if (id == "F5") {
    json m = json::object();
    for (const auto& [f, u] : utilization(log, ResourceClass::Forklift))
      m[f] = u ? json(*u * 100.0) : json(nullptr);
    return m;
  }
  if (id == "P1") {
    std::map<std::string, std::int64_t> n;
    for (const auto& p : P) ++n[p.block_id];
    auto it = pick(n, false);
    if (it == n.end()) return {{"block_id", nullptr}, {"packages", 0}};
    return {{"block_id", it->first}, {"packages", it->second}};
  }
  if (id == "P5") {
    Mean m;
    for (const auto& p : P) m.add(p.fl_placement_end - p.worker_pick_up_start);
    std::int64_t above = 0;
    if (auto avg = m.value())
      for (const auto& p : P) above += (p.fl_placement_end - p.worker_pick_up_start) > *avg;
    return {{"packages_above_average", above}, {"average_discharge_seconds", opt(m.value())}};
  }
  // P6
  std::set<std::string> ids;
  for (const auto& p : P)
    if (p.agv_id == "AGV_10" && p.forklift_id == "FL_00") ids.insert(p.package_id);
  return {{"package_ids", ids}};
}

}  // namespace wkg::analytics
