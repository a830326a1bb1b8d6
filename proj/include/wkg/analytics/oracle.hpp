#pragma once
// Ground-truth metrics computed straight from an EventLog, without going
// through the graph or the query engine.

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/sim/event_log.hpp"
#include "wkg/sim/stage.hpp"

namespace wkg::analytics {

using sim::EventLog;
using sim::PackageTrace;
using sim::ResourceClass;

using sim::kAllStages;
using sim::StageId;
using sim::stage_name;

inline constexpr std::string_view class_name(ResourceClass c) {
  switch (c) {
    case ResourceClass::Worker: return "WORKER";
    case ResourceClass::Agv: return "AGV";
    case ResourceClass::Forklift: return "FL";
  }
  return "?";
}

inline std::optional<ResourceClass> parse_resource_class(std::string_view s) {
  for (auto c : {ResourceClass::Worker, ResourceClass::Agv, ResourceClass::Forklift})
    if (class_name(c) == s) return c;
  if (s == "FORKLIFT") return ResourceClass::Forklift;
  return std::nullopt;
}

using StageTimes = std::array<double, kAllStages.size()>;

// Per-package stage durations. WaitToWorker is measured from the supplier's
// discharge start.
inline StageTimes package_stage_times(const PackageTrace& p, const sim::SupplierRecord& s) {
  return {p.worker_pick_up_start - s.discharge_start,   p.worker_pick_up_end - p.worker_pick_up_start,
          p.agv_journey_start - p.worker_pick_up_end,   p.agv_journey_end - p.agv_journey_start,
          p.fl_placement_start - p.agv_journey_end,     p.fl_placement_end - p.fl_placement_start};
}

inline std::map<std::string, StageTimes> stage_times(const EventLog& log) {
  std::map<std::string, StageTimes> out;
  for (const auto& p : log.packages) {
    const auto* s = log.supplier(p.supplier_id);
    if (!s) throw Error(ErrorCode::IncompleteTrace, p.package_id + ": no record for supplier " + p.supplier_id);
    const StageTimes t = package_stage_times(p, *s);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!std::isfinite(t[i]) || t[i] < 0.0)
        throw Error(ErrorCode::IncompleteTrace,
                    p.package_id + ": " + std::string(stage_name(kAllStages[i])) + " is not a non-negative duration");
    out.emplace(p.package_id, t);
  }
  return out;
}

struct MetricReport {
  std::string name;
  std::string units;  // "seconds" or "ratio"
  std::map<std::string, std::optional<double>> values;
  std::optional<double> global_average;  // mean over the non-null values
};

inline std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline void finish(MetricReport& r) {
  std::vector<double> xs;
  for (const auto& [k, v] : r.values)
    if (v) xs.push_back(*v);
  r.global_average = mean_of(xs);
}

struct SupplierMetrics {
  MetricReport total_unload_time;     // max worker_pick_up_end - discharge_start
  MetricReport total_discharge_time;  // max fl_placement_end - discharge_start
  MetricReport supplier_waiting_time; // discharge_start - arrival_time
};

inline SupplierMetrics supplier_metrics(const EventLog& log) {
  SupplierMetrics m;
  m.total_unload_time = {"total_unload_time", "seconds", {}, {}};
  m.total_discharge_time = {"total_discharge_time", "seconds", {}, {}};
  m.supplier_waiting_time = {"supplier_waiting_time", "seconds", {}, {}};
  std::map<std::string, std::pair<double, double>> last;  // supplier -> (max pick-up end, max placement end)
  for (const auto& p : log.packages) {
    if (!log.supplier(p.supplier_id))
      throw Error(ErrorCode::IncompleteTrace, p.package_id + ": no record for supplier " + p.supplier_id);
    auto [it, fresh] = last.try_emplace(p.supplier_id, p.worker_pick_up_end, p.fl_placement_end);
    if (!fresh) {
      it->second.first = std::max(it->second.first, p.worker_pick_up_end);
      it->second.second = std::max(it->second.second, p.fl_placement_end);
    }
  }
  for (const auto& s : log.supplier_records) {
    m.supplier_waiting_time.values[s.supplier_id] = s.discharge_start - s.arrival_time;
    auto it = last.find(s.supplier_id);
    if (it == last.end()) {
      m.total_unload_time.values[s.supplier_id] = std::nullopt;
      m.total_discharge_time.values[s.supplier_id] = std::nullopt;
      continue;
    }
    m.total_unload_time.values[s.supplier_id] = it->second.first - s.discharge_start;
    m.total_discharge_time.values[s.supplier_id] = it->second.second - s.discharge_start;
  }
  finish(m.total_unload_time);
  finish(m.total_discharge_time);
  finish(m.supplier_waiting_time);
  return m;
}

inline std::vector<std::string> configured_resources(const sim::SimConfig& c, ResourceClass cls) {
  std::vector<std::string> out;
  const int n = cls == ResourceClass::Worker ? c.workers : cls == ResourceClass::Agv ? c.agvs : c.forklifts;
  for (int i = 0; i < n; ++i)
    out.push_back(cls == ResourceClass::Worker ? c.worker_id(i) : cls == ResourceClass::Agv ? c.agv_id(i) : c.forklift_id(i));
  return out;
}

// Busy seconds over active span, per resource of `cls`. With a supplier scope
// only that supplier's packages count as busy time; the span stays the
// resource's own first-to-last busy window, so the scoped values over all
// suppliers add up to the unscoped value.
inline MetricReport resource_utilization(const EventLog& log, ResourceClass cls,
                                         const std::optional<std::string>& supplier = std::nullopt) {
  if (supplier && !log.supplier(*supplier)) throw Error(ErrorCode::UnknownScope, *supplier);
  struct Acc {
    double first = std::numeric_limits<double>::infinity();
    double last = -std::numeric_limits<double>::infinity();
    double busy = 0.0;
    bool any = false;
  };
  std::map<std::string, Acc> acc;
  for (const auto& id : configured_resources(log.config_snapshot, cls)) acc[id];
  for (const auto& p : log.packages) {
    const auto iv = sim::busy_interval(p, cls);
    auto& a = acc[sim::resource_of(p, cls)];
    a.any = true;
    a.first = std::min(a.first, iv.start);
    a.last = std::max(a.last, iv.end);
    if (!supplier || p.supplier_id == *supplier) a.busy += iv.end - iv.start;
  }
  MetricReport r;
  r.name = std::string(class_name(cls)) + "_utilization" + (supplier ? ":" + *supplier : "");
  r.units = "ratio";
  for (const auto& [id, a] : acc) {
    const double span = a.any ? a.last - a.first : 0.0;
    r.values[id] = span > 0.0 ? std::optional<double>(a.busy / span) : std::nullopt;
  }
  finish(r);
  return r;
}

// ---- bottleneck report ------------------------------------------------------

struct StageDeviation {
  StageId stage;
  double subject_mean = 0.0;
  double global_mean = 0.0;
  double ratio = 0.0;  // subject / global; 1 when both are 0, +inf when only global is 0
};

struct UtilizationRow {
  ResourceClass cls;
  std::optional<double> subject;
  std::optional<double> global;
};

struct BottleneckReport {
  std::string subject;
  std::string subject_kind;  // SUPPLIER, WORKER, AGV or FL
  std::size_t packages = 0;
  std::vector<StageDeviation> stages;
  std::vector<UtilizationRow> utilization;
  // Supplier subjects only: total discharge time against the supplier average.
  std::optional<double> discharge_seconds;
  std::optional<double> global_discharge_seconds;
  std::optional<double> discharge_ratio;
  StageId verdict = StageId::WaitToWorker;
};

inline double deviation_ratio(double subject, double global) {
  if (global > 0.0) return subject / global;
  return subject > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

inline BottleneckReport bottleneck_report(const EventLog& log, const std::string& subject) {
  BottleneckReport r;
  r.subject = subject;
  std::optional<ResourceClass> cls;
  if (log.supplier(subject)) {
    r.subject_kind = "SUPPLIER";
  } else {
    for (const auto& p : log.packages)
      for (auto c : {ResourceClass::Worker, ResourceClass::Agv, ResourceClass::Forklift})
        if (!cls && sim::resource_of(p, c) == subject) cls = c;
    if (!cls) throw Error(ErrorCode::UnknownResource, subject);
    r.subject_kind = std::string(class_name(*cls));
  }
  auto in_subject = [&](const PackageTrace& p) {
    return cls ? sim::resource_of(p, *cls) == subject : p.supplier_id == subject;
  };

  const auto times = stage_times(log);
  StageTimes subject_sum{}, global_sum{};
  std::size_t global_n = 0;
  for (const auto& p : log.packages) {
    const auto& t = times.at(p.package_id);
    ++global_n;
    for (std::size_t i = 0; i < t.size(); ++i) global_sum[i] += t[i];
    if (in_subject(p)) {
      ++r.packages;
      for (std::size_t i = 0; i < t.size(); ++i) subject_sum[i] += t[i];
    }
  }
  double best = -1.0;
  for (std::size_t i = 0; i < kAllStages.size(); ++i) {
    StageDeviation d{kAllStages[i]};
    if (r.packages) d.subject_mean = subject_sum[i] / static_cast<double>(r.packages);
    if (global_n) d.global_mean = global_sum[i] / static_cast<double>(global_n);
    d.ratio = deviation_ratio(d.subject_mean, d.global_mean);
    if (d.ratio > best) best = d.ratio, r.verdict = d.stage;
    r.stages.push_back(d);
  }

  if (!cls) {
    for (auto c : {ResourceClass::Agv, ResourceClass::Forklift, ResourceClass::Worker})
      r.utilization.push_back({c, resource_utilization(log, c, subject).global_average,
                               resource_utilization(log, c).global_average});
    const auto m = supplier_metrics(log);
    r.discharge_seconds = m.total_discharge_time.values.at(subject);
    r.global_discharge_seconds = m.total_discharge_time.global_average;
    if (r.discharge_seconds && r.global_discharge_seconds)
      r.discharge_ratio = deviation_ratio(*r.discharge_seconds, *r.global_discharge_seconds);
  } else {
    const auto u = resource_utilization(log, *cls);
    r.utilization.push_back({*cls, u.values.at(subject), u.global_average});
  }
  return r;
}

// ---- JSON -------------------------------------------------------------------

inline nlohmann::json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : r.values) values[k] = optional_json(v);
  return {{"name", r.name}, {"units", r.units}, {"values", values}, {"global_average", optional_json(r.global_average)}};
}

inline nlohmann::json to_json(const BottleneckReport& r) {
  auto stages = nlohmann::json::array();
  for (const auto& d : r.stages)
    stages.push_back({{"stage", stage_name(d.stage)},
                      {"subject_mean", d.subject_mean},
                      {"global_mean", d.global_mean},
                      {"ratio", optional_json(d.ratio)}});
  auto util = nlohmann::json::array();
  for (const auto& u : r.utilization)
    util.push_back({{"class", class_name(u.cls)}, {"subject", optional_json(u.subject)}, {"global", optional_json(u.global)}});
  nlohmann::json j{{"subject", r.subject},
                   {"subject_kind", r.subject_kind},
                   {"packages", r.packages},
                   {"stages", stages},
                   {"utilization", util},
                   {"verdict", stage_name(r.verdict)}};
  if (r.subject_kind == "SUPPLIER")
    j["discharge"] = {{"subject_seconds", optional_json(r.discharge_seconds)},
                      {"global_average_seconds", optional_json(r.global_discharge_seconds)},
                      {"ratio", optional_json(r.discharge_ratio)}};
  return j;
}

}  // namespace wkg::analytics
