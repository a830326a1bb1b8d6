#pragma once
// Simulation output: one timestamp chain per package plus supplier-level
// records. All times are seconds since the simulation epoch.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wkg/sim/config.hpp"

namespace wkg::sim {

struct PackageTrace {
  std::string package_id;
  std::string supplier_id;
  std::string worker_id;
  std::string agv_id;
  std::string forklift_id;
  std::string block_id;
  int bay = 0;
  int shelf = 0;

  double supplier_arrival = 0.0;
  double discharge_start = 0.0;
  double worker_pick_up_start = 0.0;
  double worker_pick_up_end = 0.0;
  double agv_arrival = 0.0;
  double agv_journey_start = 0.0;
  double agv_journey_end = 0.0;
  double fl_placement_start = 0.0;
  double fl_placement_end = 0.0;

  // Chain in causal order; agv_arrival may precede worker_pick_up_end when the
  // AGV was already waiting, so it is checked separately.
  std::array<double, 8> chain() const {
    return {supplier_arrival,  discharge_start, worker_pick_up_start, worker_pick_up_end,
            agv_journey_start, agv_journey_end, fl_placement_start,   fl_placement_end};
  }

  bool operator==(const PackageTrace&) const = default;
};

struct SupplierRecord {
  std::string supplier_id;
  double arrival_time = 0.0;
  double discharge_start = 0.0;
  double discharge_end = 0.0;
  bool operator==(const SupplierRecord&) const = default;
};

struct BusyInterval {
  double start = 0.0;
  double end = 0.0;
  std::string package_id;
  bool operator==(const BusyInterval&) const = default;
};

using BusyMap = std::map<std::string, std::vector<BusyInterval>>;

enum class ResourceClass { Worker, Agv, Forklift };

// Busy interval of one resource class for one package.
inline BusyInterval busy_interval(const PackageTrace& p, ResourceClass cls) {
  switch (cls) {
    case ResourceClass::Worker: return {p.worker_pick_up_start, p.worker_pick_up_end, p.package_id};
    case ResourceClass::Agv: return {p.agv_journey_start, p.agv_journey_end, p.package_id};
    case ResourceClass::Forklift: return {p.fl_placement_start, p.fl_placement_end, p.package_id};
  }
  return {};
}

inline const std::string& resource_of(const PackageTrace& p, ResourceClass cls) {
  switch (cls) {
    case ResourceClass::Worker: return p.worker_id;
    case ResourceClass::Agv: return p.agv_id;
    case ResourceClass::Forklift: return p.forklift_id;
  }
  return p.worker_id;
}

inline BusyMap busy_intervals_from_traces(const std::vector<PackageTrace>& packages) {
  BusyMap out;
  for (const auto& p : packages)
    for (auto cls : {ResourceClass::Worker, ResourceClass::Agv, ResourceClass::Forklift})
      out[resource_of(p, cls)].push_back(busy_interval(p, cls));
  for (auto& [id, intervals] : out)
    std::stable_sort(intervals.begin(), intervals.end(),
                     [](const BusyInterval& a, const BusyInterval& b) { return a.start < b.start; });
  return out;
}

struct EventLog {
  SimConfig config_snapshot;
  std::vector<PackageTrace> packages;
  std::vector<SupplierRecord> supplier_records;
  BusyMap resource_busy_intervals;

  const SupplierRecord* supplier(const std::string& id) const {
    for (const auto& s : supplier_records)
      if (s.supplier_id == id) return &s;
    return nullptr;
  }

  bool operator==(const EventLog&) const = default;
};

// Checks the log-level invariants; empty result means the log is consistent.
inline std::vector<Violation> check_log(const EventLog& log) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  std::map<std::string, int> per_supplier;
  for (const auto& p : log.packages) {
    if (!ids.insert(p.package_id).second)
      out.push_back({"DUPLICATE_PACKAGE", p.package_id});
    auto chain = p.chain();
    for (std::size_t i = 1; i < chain.size(); ++i)
      if (!(chain[i - 1] <= chain[i])) {
        out.push_back({"NON_MONOTONE", p.package_id});
        break;
      }
    if (!(p.agv_arrival <= p.agv_journey_start))
      out.push_back({"NON_MONOTONE", p.package_id + " agv_arrival"});
    ++per_supplier[p.supplier_id];
    if (!log.supplier(p.supplier_id))
      out.push_back({"UNKNOWN_SUPPLIER", p.package_id + " -> " + p.supplier_id});
  }
  const auto& range = log.config_snapshot.packages_per_supplier;
  for (const auto& s : log.supplier_records) {
    int n = per_supplier.count(s.supplier_id) ? per_supplier.at(s.supplier_id) : 0;
    if (n < range.lo || n > range.hi)
      out.push_back({"PACKAGE_COUNT", s.supplier_id + " has " + std::to_string(n)});
    if (!(s.arrival_time <= s.discharge_start && s.discharge_start <= s.discharge_end))
      out.push_back({"NON_MONOTONE", "supplier " + s.supplier_id});
  }
  for (const auto& [res, intervals] : log.resource_busy_intervals) {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (!(intervals[i].start <= intervals[i].end))
        out.push_back({"BAD_INTERVAL", res});
      if (i > 0 && intervals[i].start < intervals[i - 1].end)
        out.push_back({"OVERLAP", res + " at " + intervals[i].package_id});
    }
  }
  return out;
}

}  // namespace wkg::sim
