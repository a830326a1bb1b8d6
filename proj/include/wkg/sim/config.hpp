#pragma once
// Warehouse parameterization and injected inefficiencies.
//
// Defaults describe the baseline facility: five suppliers, three docks, twelve
// workers in teams of four, twenty AGVs, five block-dedicated forklifts and
// five storage blocks of 15 bays x 3 shelves.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/sim/ids.hpp"
#include "wkg/sim/stage.hpp"

namespace wkg::sim {

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool operator==(const IntRange&) const = default;
};

struct SecondsRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const SecondsRange&) const = default;
};

struct SupplierSpec {
  std::string id;
  double arrival_offset = 0.0;  // seconds
  bool operator==(const SupplierSpec&) const = default;
};

struct Layout {
  double parking_to_dock = 50.0;       // meters, travelled at supplier_speed
  double dock_to_waiting_point = 30.0; // meters, walked by workers
  std::vector<double> waiting_point_to_block{120.0, 130.0, 140.0, 150.0, 160.0};
  bool operator==(const Layout&) const = default;
};

// ---- scenarios --------------------------------------------------------------

struct NoScenario {
  bool operator==(const NoScenario&) const = default;
};

// Extra latency on one stage for one supplier's packages. Exactly one of
// added_delay / multiplier is set.
struct StageTransferDelay {
  std::string supplier_id;
  StageId stage = StageId::WaitToWorker;
  std::optional<double> added_delay;
  std::optional<double> multiplier;
  bool operator==(const StageTransferDelay&) const = default;
};

struct DegradedForklift {
  std::string forklift_id;
  double slowdown_factor = 1.8;
  bool operator==(const DegradedForklift&) const = default;
};

struct SupplierProcessingDelay {
  std::string supplier_id;
  double handling_multiplier = 1.6;
  bool misallocation = true;
  bool operator==(const SupplierProcessingDelay&) const = default;
};

using ScenarioSpec =
    std::variant<NoScenario, StageTransferDelay, DegradedForklift, SupplierProcessingDelay>;

inline std::string scenario_name(const ScenarioSpec& s) {
  struct {
    std::string operator()(const NoScenario&) const { return "none"; }
    std::string operator()(const StageTransferDelay&) const { return "stage-delay"; }
    std::string operator()(const DegradedForklift&) const { return "degraded-forklift"; }
    std::string operator()(const SupplierProcessingDelay&) const { return "supplier-delay"; }
  } visitor;
  return std::visit(visitor, s);
}

// ---- config -----------------------------------------------------------------

struct SimConfig {
  std::vector<SupplierSpec> suppliers = default_suppliers();
  IntRange packages_per_supplier{30, 35};
  double supplier_speed = 20.0;  // km/h
  int max_docks = 3;

  int workers = 12;
  int team_size = 4;
  double worker_speed = 2.0;  // km/h

  int agvs = 20;
  double agv_speed = 3.5;             // km/h
  double agv_distance = 140.0;        // meters, used when the layout has no per-block distances
  double agv_distance_jitter = 0.0;   // meters, uniform +/- around the block distance

  int forklifts = 5;
  double forklift_speed = 5.0;             // km/h
  double forklift_travel_distance = 20.0;  // meters, pickup point to bay
  SecondsRange storage_duration{60.0, 90.0};

  int blocks = 5;
  int bays_per_block = 15;
  int shelves_per_bay = 3;
  bool block_dedicated_forklifts = true;

  Layout layout;
  std::uint64_t seed = 7;
  ScenarioSpec scenario = NoScenario{};

  static std::vector<SupplierSpec> default_suppliers() {
    return {{"AuroraFarms", 0.0}, {"BlackSheepDist", 0.0}, {"CamelCargo", 0.0},
            {"DeltaDrops", 0.0}, {"EvergreenEdge", 0.0}};
  }

  int teams() const { return team_size > 0 ? workers / team_size : 0; }
  int block_capacity() const { return bays_per_block * shelves_per_bay; }
  int total_capacity() const { return blocks * block_capacity(); }

  std::string worker_id(int i) const { return indexed_id("BW_", i); }
  std::string agv_id(int i) const { return indexed_id("AGV_", i); }
  std::string forklift_id(int i) const { return indexed_id("FL_", i); }
  std::string block_id(int i) const { return block_label(i); }

  double block_distance(int block) const {
    if (block >= 0 && static_cast<std::size_t>(block) < layout.waiting_point_to_block.size())
      return layout.waiting_point_to_block[static_cast<std::size_t>(block)];
    return agv_distance;
  }

  bool operator==(const SimConfig&) const = default;
};

// ---- validation -------------------------------------------------------------

struct Violation {
  std::string code;
  std::string message;
  bool operator==(const Violation&) const = default;
};

inline std::vector<Violation> validate_scenario(const SimConfig& c, const ScenarioSpec& s) {
  std::vector<Violation> out;
  auto has_supplier = [&](const std::string& id) {
    for (const auto& sp : c.suppliers)
      if (sp.id == id) return true;
    return false;
  };
  auto has_forklift = [&](const std::string& id) {
    for (int i = 0; i < c.forklifts; ++i)
      if (c.forklift_id(i) == id) return true;
    return false;
  };
  if (const auto* d = std::get_if<StageTransferDelay>(&s)) {
    if (!has_supplier(d->supplier_id))
      out.push_back({"UNKNOWN_RESOURCE", "unknown supplier '" + d->supplier_id + "'"});
    if (d->added_delay.has_value() == d->multiplier.has_value())
      out.push_back({"INVALID_SCENARIO", "exactly one of added_delay and multiplier must be set"});
    if (d->added_delay && !(*d->added_delay >= 0.0))
      out.push_back({"NEGATIVE_DELAY", "added_delay must be >= 0"});
    if (d->multiplier && !(*d->multiplier > 1.0))
      out.push_back({"INVALID_FACTOR", "multiplier must be > 1"});
  } else if (const auto* f = std::get_if<DegradedForklift>(&s)) {
    if (!has_forklift(f->forklift_id))
      out.push_back({"UNKNOWN_RESOURCE", "unknown forklift '" + f->forklift_id + "'"});
    if (!(f->slowdown_factor > 1.0))
      out.push_back({"INVALID_FACTOR", "slowdown_factor must be > 1"});
  } else if (const auto* p = std::get_if<SupplierProcessingDelay>(&s)) {
    if (!has_supplier(p->supplier_id))
      out.push_back({"UNKNOWN_RESOURCE", "unknown supplier '" + p->supplier_id + "'"});
    if (!(p->handling_multiplier > 1.0))
      out.push_back({"INVALID_FACTOR", "handling_multiplier must be > 1"});
  }
  return out;
}

inline std::vector<Violation> validate_config(const SimConfig& c) {
  std::vector<Violation> out;
  auto positive_count = [&](int v, const char* name) {
    if (v < 1) out.push_back({"NON_POSITIVE_COUNT", std::string(name) + " must be >= 1"});
  };
  auto positive_speed = [&](double v, const char* name) {
    if (!(v > 0.0)) out.push_back({"NON_POSITIVE_SPEED", std::string(name) + " must be > 0"});
  };
  auto non_negative = [&](double v, const char* name) {
    if (!(v >= 0.0)) out.push_back({"NEGATIVE_DISTANCE", std::string(name) + " must be >= 0"});
  };

  positive_count(c.max_docks, "max_docks");
  positive_count(c.workers, "workers");
  positive_count(c.team_size, "team_size");
  positive_count(c.agvs, "agvs");
  positive_count(c.forklifts, "forklifts");
  positive_count(c.blocks, "blocks");
  positive_count(c.bays_per_block, "bays_per_block");
  positive_count(c.shelves_per_bay, "shelves_per_bay");
  if (c.team_size >= 1 && c.workers >= 1 && c.workers % c.team_size != 0)
    out.push_back({"TEAM_DIVISIBILITY", "workers (" + std::to_string(c.workers) +
                                            ") must be a multiple of team_size (" +
                                            std::to_string(c.team_size) + ")"});
  if (c.packages_per_supplier.lo < 0 || c.packages_per_supplier.lo > c.packages_per_supplier.hi)
    out.push_back({"INVALID_RANGE", "packages_per_supplier must satisfy 0 <= lo <= hi"});
  if (!(c.storage_duration.lo >= 0.0) || c.storage_duration.lo > c.storage_duration.hi)
    out.push_back({"INVALID_RANGE", "storage_duration must satisfy 0 <= lo <= hi"});

  positive_speed(c.supplier_speed, "supplier_speed");
  positive_speed(c.worker_speed, "worker_speed");
  positive_speed(c.agv_speed, "agv_speed");
  positive_speed(c.forklift_speed, "forklift_speed");

  non_negative(c.agv_distance, "agv_distance");
  non_negative(c.agv_distance_jitter, "agv_distance_jitter");
  non_negative(c.forklift_travel_distance, "forklift_travel_distance");
  non_negative(c.layout.parking_to_dock, "layout.parking_to_dock");
  non_negative(c.layout.dock_to_waiting_point, "layout.dock_to_waiting_point");
  for (double d : c.layout.waiting_point_to_block) non_negative(d, "layout.waiting_point_to_block");
  if (!c.layout.waiting_point_to_block.empty() &&
      c.layout.waiting_point_to_block.size() != static_cast<std::size_t>(c.blocks))
    out.push_back({"LAYOUT_MISMATCH", "waiting_point_to_block needs one distance per block"});
  for (std::size_t b = 0; b < c.layout.waiting_point_to_block.size(); ++b)
    if (c.layout.waiting_point_to_block[b] < c.agv_distance_jitter)
      out.push_back({"INVALID_RANGE", "agv_distance_jitter exceeds a block distance"});

  if (c.block_dedicated_forklifts && c.forklifts != c.blocks)
    out.push_back({"FORKLIFT_BLOCK_MISMATCH", "block-dedicated forklifts need forklifts == blocks"});

  for (std::size_t i = 0; i < c.suppliers.size(); ++i) {
    const auto& s = c.suppliers[i];
    if (s.id.empty()) out.push_back({"INVALID_ID", "supplier id must be non-empty"});
    if (!(s.arrival_offset >= 0.0))
      out.push_back({"NEGATIVE_OFFSET", "supplier '" + s.id + "' arrival_offset must be >= 0"});
    for (std::size_t j = 0; j < i; ++j)
      if (c.suppliers[j].id == s.id)
        out.push_back({"DUPLICATE_SUPPLIER", "supplier '" + s.id + "' listed twice"});
  }

  auto scenario = validate_scenario(c, c.scenario);
  out.insert(out.end(), scenario.begin(), scenario.end());
  return out;
}

inline std::string describe(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += v.code + ": " + v.message;
  }
  return out;
}

// Returns a copy of `config` whose duration model embeds `scenario`.
inline SimConfig apply_scenario(SimConfig config, const ScenarioSpec& scenario) {
  auto violations = validate_scenario(config, scenario);
  for (const auto& v : violations)
    if (v.code == "UNKNOWN_RESOURCE") throw Error(ErrorCode::UnknownResource, v.message);
  if (!violations.empty()) throw Error(ErrorCode::ConfigInvalid, describe(violations));
  config.scenario = scenario;
  return config;
}

// Seconds needed to cover `distance` meters at `speed_kmh`.
inline double travel_time(double distance, double speed_kmh) {
  if (!(speed_kmh > 0.0)) throw Error(ErrorCode::NonPositiveSpeed, "speed must be > 0");
  if (!(distance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");
  return distance / (speed_kmh * 1000.0 / 3600.0);
}

// ---- JSON -------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const ScenarioSpec& s) {
  using nlohmann::json;
  if (std::holds_alternative<NoScenario>(s)) {
    j = json{{"kind", "none"}};
  } else if (const auto* d = std::get_if<StageTransferDelay>(&s)) {
    j = json{{"kind", "stage-delay"}, {"supplier_id", d->supplier_id},
             {"stage", std::string(stage_name(d->stage))}};
    if (d->added_delay) j["added_delay"] = *d->added_delay;
    if (d->multiplier) j["multiplier"] = *d->multiplier;
  } else if (const auto* f = std::get_if<DegradedForklift>(&s)) {
    j = json{{"kind", "degraded-forklift"}, {"forklift_id", f->forklift_id},
             {"slowdown_factor", f->slowdown_factor}};
  } else if (const auto* p = std::get_if<SupplierProcessingDelay>(&s)) {
    j = json{{"kind", "supplier-delay"}, {"supplier_id", p->supplier_id},
             {"handling_multiplier", p->handling_multiplier}, {"misallocation", p->misallocation}};
  }
}

inline void from_json(const nlohmann::json& j, ScenarioSpec& s) {
  const auto kind = j.value("kind", std::string("none"));
  if (kind == "none") {
    s = NoScenario{};
  } else if (kind == "stage-delay") {
    StageTransferDelay d;
    d.supplier_id = j.at("supplier_id").get<std::string>();
    auto stage = parse_stage(j.value("stage", std::string("WaitToWorker")));
    if (!stage) throw Error(ErrorCode::ConfigInvalid, "unknown stage in scenario");
    d.stage = *stage;
    if (j.contains("added_delay")) d.added_delay = j.at("added_delay").get<double>();
    if (j.contains("multiplier")) d.multiplier = j.at("multiplier").get<double>();
    if (!d.added_delay && !d.multiplier) d.multiplier = 2.5;
    s = d;
  } else if (kind == "degraded-forklift") {
    DegradedForklift f;
    f.forklift_id = j.at("forklift_id").get<std::string>();
    f.slowdown_factor = j.value("slowdown_factor", 1.8);
    s = f;
  } else if (kind == "supplier-delay") {
    SupplierProcessingDelay p;
    p.supplier_id = j.at("supplier_id").get<std::string>();
    p.handling_multiplier = j.value("handling_multiplier", 1.6);
    p.misallocation = j.value("misallocation", true);
    s = p;
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown scenario kind '" + kind + "'");
  }
}

inline void to_json(nlohmann::json& j, const SimConfig& c) {
  using nlohmann::json;
  json suppliers = json::array();
  for (const auto& s : c.suppliers)
    suppliers.push_back({{"id", s.id}, {"arrival_offset", s.arrival_offset}});
  json scenario;
  to_json(scenario, c.scenario);
  j = json{
      {"suppliers", suppliers},
      {"packages_per_supplier", {c.packages_per_supplier.lo, c.packages_per_supplier.hi}},
      {"supplier_speed", c.supplier_speed},
      {"max_docks", c.max_docks},
      {"workers", c.workers},
      {"team_size", c.team_size},
      {"worker_speed", c.worker_speed},
      {"agvs", c.agvs},
      {"agv_speed", c.agv_speed},
      {"agv_distance", c.agv_distance},
      {"agv_distance_jitter", c.agv_distance_jitter},
      {"forklifts", c.forklifts},
      {"forklift_speed", c.forklift_speed},
      {"forklift_travel_distance", c.forklift_travel_distance},
      {"storage_duration", {c.storage_duration.lo, c.storage_duration.hi}},
      {"blocks", c.blocks},
      {"bays_per_block", c.bays_per_block},
      {"shelves_per_bay", c.shelves_per_bay},
      {"block_dedicated_forklifts", c.block_dedicated_forklifts},
      {"layout",
       {{"parking_to_dock", c.layout.parking_to_dock},
        {"dock_to_waiting_point", c.layout.dock_to_waiting_point},
        {"waiting_point_to_block", c.layout.waiting_point_to_block}}},
      {"seed", c.seed},
      {"scenario", scenario},
  };
}

// Missing keys keep their defaults, so partial documents are accepted.
inline void from_json(const nlohmann::json& j, SimConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  try {
    if (j.contains("suppliers")) {
      c.suppliers.clear();
      for (const auto& s : j.at("suppliers")) {
        if (s.is_string())
          c.suppliers.push_back({s.get<std::string>(), 0.0});
        else
          c.suppliers.push_back({s.at("id").get<std::string>(), s.value("arrival_offset", 0.0)});
      }
    }
    if (j.contains("packages_per_supplier")) {
      const auto& r = j.at("packages_per_supplier");
      c.packages_per_supplier = {r.at(0).get<int>(), r.at(1).get<int>()};
    }
    auto num = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    num("supplier_speed", c.supplier_speed);
    num("max_docks", c.max_docks);
    num("workers", c.workers);
    num("team_size", c.team_size);
    num("worker_speed", c.worker_speed);
    num("agvs", c.agvs);
    num("agv_speed", c.agv_speed);
    num("agv_distance", c.agv_distance);
    num("agv_distance_jitter", c.agv_distance_jitter);
    num("forklifts", c.forklifts);
    num("forklift_speed", c.forklift_speed);
    num("forklift_travel_distance", c.forklift_travel_distance);
    num("blocks", c.blocks);
    num("bays_per_block", c.bays_per_block);
    num("shelves_per_bay", c.shelves_per_bay);
    num("block_dedicated_forklifts", c.block_dedicated_forklifts);
    num("seed", c.seed);
    if (j.contains("storage_duration")) {
      const auto& r = j.at("storage_duration");
      c.storage_duration = {r.at(0).get<double>(), r.at(1).get<double>()};
    }
    if (j.contains("layout")) {
      const auto& l = j.at("layout");
      c.layout.parking_to_dock = l.value("parking_to_dock", c.layout.parking_to_dock);
      c.layout.dock_to_waiting_point =
          l.value("dock_to_waiting_point", c.layout.dock_to_waiting_point);
      if (l.contains("waiting_point_to_block"))
        c.layout.waiting_point_to_block = l.at("waiting_point_to_block").get<std::vector<double>>();
    }
    if (j.contains("scenario")) from_json(j.at("scenario"), c.scenario);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

// Compact scenario syntax used on the command line:
//   none
//   stage-delay:<supplier>:<Stage>:x<multiplier>   or  ...:+<seconds>
//   degraded-forklift:<forklift>[:<factor>]
//   supplier-delay:<supplier>[:<multiplier>[:nomisalloc]]
inline ScenarioSpec parse_scenario(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "' in scenario");
    }
  };
  const auto& kind = parts[0];
  if (kind == "none" || kind.empty()) return NoScenario{};
  if (kind == "stage-delay" && parts.size() >= 2) {
    StageTransferDelay d;
    d.supplier_id = parts[1];
    if (parts.size() >= 3) {
      auto stage = parse_stage(parts[2]);
      if (!stage) throw Error(ErrorCode::InvalidArgument, "unknown stage '" + parts[2] + "'");
      d.stage = *stage;
    }
    if (parts.size() >= 4 && !parts[3].empty()) {
      if (parts[3][0] == '+')
        d.added_delay = number(parts[3].substr(1));
      else if (parts[3][0] == 'x')
        d.multiplier = number(parts[3].substr(1));
      else
        d.multiplier = number(parts[3]);
    } else {
      d.multiplier = 2.5;
    }
    return d;
  }
  if (kind == "degraded-forklift" && parts.size() >= 2) {
    DegradedForklift f;
    f.forklift_id = parts[1];
    if (parts.size() >= 3) f.slowdown_factor = number(parts[2]);
    return f;
  }
  if (kind == "supplier-delay" && parts.size() >= 2) {
    SupplierProcessingDelay p;
    p.supplier_id = parts[1];
    if (parts.size() >= 3) p.handling_multiplier = number(parts[2]);
    if (parts.size() >= 4) p.misallocation = parts[3] != "nomisalloc";
    return p;
  }
  throw Error(ErrorCode::InvalidArgument, "unrecognized scenario '" + text + "'");
}

}  // namespace wkg::sim
