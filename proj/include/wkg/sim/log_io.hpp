#pragma once
// EventLog persistence.
//
// JSONL: a header object (format tag, version, config snapshot, supplier
// records) followed by one PackageTrace object per line. Timestamps are float
// seconds by default; with LogFormatOptions::iso they are rendered as ISO-8601
// strings anchored at the epoch (lossy below a microsecond).
//
// CSV: one row per package, one column per PackageTrace field.

#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/sim/event_log.hpp"
#include "wkg/time.hpp"

namespace wkg::sim {

inline constexpr std::string_view kLogFormat = "wkg-eventlog";
inline constexpr int kLogFormatVersion = 1;

struct LogFormatOptions {
  bool iso = false;
  std::string epoch{kDefaultEpoch};
};

namespace detail {

inline constexpr const char* kTimeFields[] = {
    "supplier_arrival",  "discharge_start", "worker_pick_up_start", "worker_pick_up_end",
    "agv_arrival",       "agv_journey_start", "agv_journey_end",    "fl_placement_start",
    "fl_placement_end"};

inline double* time_field(PackageTrace& p, std::string_view name) {
  if (name == "supplier_arrival") return &p.supplier_arrival;
  if (name == "discharge_start") return &p.discharge_start;
  if (name == "worker_pick_up_start") return &p.worker_pick_up_start;
  if (name == "worker_pick_up_end") return &p.worker_pick_up_end;
  if (name == "agv_arrival") return &p.agv_arrival;
  if (name == "agv_journey_start") return &p.agv_journey_start;
  if (name == "agv_journey_end") return &p.agv_journey_end;
  if (name == "fl_placement_start") return &p.fl_placement_start;
  if (name == "fl_placement_end") return &p.fl_placement_end;
  return nullptr;
}

inline nlohmann::json time_value(double t, const LogFormatOptions& opt, const Clock& clock) {
  if (opt.iso) return clock.iso(t);
  return t;
}

inline double read_time(const nlohmann::json& v, const Clock& clock) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return clock.seconds(v.get<std::string>());
  throw Error(ErrorCode::ParseFailure, "timestamp must be a number or ISO-8601 string");
}

}  // namespace detail

inline nlohmann::json trace_to_json(const PackageTrace& p, const LogFormatOptions& opt = {}) {
  const Clock clock(opt.epoch);
  nlohmann::json j{{"package_id", p.package_id},   {"supplier_id", p.supplier_id},
                   {"worker_id", p.worker_id},     {"agv_id", p.agv_id},
                   {"forklift_id", p.forklift_id}, {"block_id", p.block_id},
                   {"bay", p.bay},                 {"shelf", p.shelf}};
  PackageTrace copy = p;
  for (const char* f : detail::kTimeFields)
    j[f] = detail::time_value(*detail::time_field(copy, f), opt, clock);
  return j;
}

inline PackageTrace trace_from_json(const nlohmann::json& j, const Clock& clock) {
  PackageTrace p;
  p.package_id = j.at("package_id").get<std::string>();
  p.supplier_id = j.at("supplier_id").get<std::string>();
  p.worker_id = j.at("worker_id").get<std::string>();
  p.agv_id = j.at("agv_id").get<std::string>();
  p.forklift_id = j.at("forklift_id").get<std::string>();
  p.block_id = j.at("block_id").get<std::string>();
  p.bay = j.at("bay").get<int>();
  p.shelf = j.at("shelf").get<int>();
  for (const char* f : detail::kTimeFields) *detail::time_field(p, f) = detail::read_time(j.at(f), clock);
  return p;
}

inline std::string export_log_jsonl(const EventLog& log, const LogFormatOptions& opt = {}) {
  const Clock clock(opt.epoch);
  nlohmann::json suppliers = nlohmann::json::array();
  for (const auto& s : log.supplier_records)
    suppliers.push_back({{"supplier_id", s.supplier_id},
                         {"arrival_time", detail::time_value(s.arrival_time, opt, clock)},
                         {"discharge_start", detail::time_value(s.discharge_start, opt, clock)},
                         {"discharge_end", detail::time_value(s.discharge_end, opt, clock)}});
  nlohmann::json header{{"format", kLogFormat},
                        {"version", kLogFormatVersion},
                        {"epoch", opt.epoch},
                        {"config", log.config_snapshot},
                        {"suppliers", suppliers}};
  std::string out = header.dump();
  out += '\n';
  for (const auto& p : log.packages) {
    out += trace_to_json(p, opt).dump();
    out += '\n';
  }
  return out;
}

inline EventLog import_log_jsonl(std::istream& in) {
  EventLog log;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  Clock clock;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (!have_header) {
        if (j.value("format", std::string()) != kLogFormat)
          throw Error(ErrorCode::ParseFailure, "missing event-log header");
        if (j.value("version", 0) != kLogFormatVersion)
          throw Error(ErrorCode::ParseFailure, "unsupported event-log version");
        clock = Clock(j.value("epoch", std::string(kDefaultEpoch)));
        log.config_snapshot = j.at("config").get<SimConfig>();
        for (const auto& s : j.at("suppliers"))
          log.supplier_records.push_back({s.at("supplier_id").get<std::string>(),
                                          detail::read_time(s.at("arrival_time"), clock),
                                          detail::read_time(s.at("discharge_start"), clock),
                                          detail::read_time(s.at("discharge_end"), clock)});
        have_header = true;
      } else {
        log.packages.push_back(trace_from_json(j, clock));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseFailure, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailure && e.code() != ErrorCode::ConfigInvalid) throw;
      throw Error(ErrorCode::ParseFailure, "line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseFailure, "line 1: empty event log");
  log.resource_busy_intervals = busy_intervals_from_traces(log.packages);
  return log;
}

inline EventLog import_log_jsonl(const std::string& text) {
  std::istringstream in(text);
  return import_log_jsonl(in);
}

inline std::string export_log_csv(const EventLog& log, const LogFormatOptions& opt = {}) {
  const Clock clock(opt.epoch);
  std::string out = "package_id,supplier_id,worker_id,agv_id,forklift_id,block_id,bay,shelf";
  for (const char* f : detail::kTimeFields) {
    out += ',';
    out += f;
  }
  out += '\n';
  for (auto p : log.packages) {
    out += p.package_id + ',' + p.supplier_id + ',' + p.worker_id + ',' + p.agv_id + ',' +
           p.forklift_id + ',' + p.block_id + ',' + std::to_string(p.bay) + ',' +
           std::to_string(p.shelf);
    for (const char* f : detail::kTimeFields) {
      const double t = *detail::time_field(p, f);
      out += ',';
      out += opt.iso ? clock.iso(t) : format_double(t);
    }
    out += '\n';
  }
  return out;
}

}  // namespace wkg::sim
