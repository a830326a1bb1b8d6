#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "wkg/sim/log_io.hpp"
#include "wkg/sim/simulation.hpp"

using namespace wkg;
using namespace wkg::sim;

namespace {

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

SimConfig seeded(std::uint64_t seed) {
  SimConfig c;
  c.seed = seed;
  return c;
}

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

TEST(TravelTime, UnitConversion) {
  EXPECT_DOUBLE_EQ(travel_time(140.0, 3.5), 144.0);
  EXPECT_EQ(travel_time(0.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(travel_time(100.0, 2.0), 180.0);
}

TEST(TravelTime, RejectsNonPositiveSpeed) {
  try {
    travel_time(10.0, 0.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveSpeed);
  }
  EXPECT_THROW(travel_time(10.0, -1.0), Error);
}

TEST(ValidateConfig, DefaultsAreValid) {
  EXPECT_TRUE(validate_config(SimConfig{}).empty());
  EXPECT_EQ(SimConfig{}.total_capacity(), 225);
}

TEST(ValidateConfig, TeamDivisibility) {
  SimConfig c;
  c.workers = 10;
  auto vs = validate_config(c);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, "TEAM_DIVISIBILITY");
}

TEST(ValidateConfig, UnknownForklift) {
  SimConfig c;
  c.scenario = DegradedForklift{"FL_99", 2.0};
  auto vs = validate_config(c);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].code, "UNKNOWN_RESOURCE");
}

TEST(ValidateConfig, ReportsEveryViolation) {
  SimConfig c;
  c.agvs = 0;
  c.agv_speed = -1.0;
  c.packages_per_supplier = {40, 30};
  c.forklifts = 4;
  auto vs = validate_config(c);
  EXPECT_TRUE(has_code(vs, "NON_POSITIVE_COUNT"));
  EXPECT_TRUE(has_code(vs, "NON_POSITIVE_SPEED"));
  EXPECT_TRUE(has_code(vs, "INVALID_RANGE"));
  EXPECT_TRUE(has_code(vs, "FORKLIFT_BLOCK_MISMATCH"));
}

TEST(ValidateConfig, ScenarioFactors) {
  SimConfig c;
  c.scenario = DegradedForklift{"FL_00", 0.5};
  EXPECT_TRUE(has_code(validate_config(c), "INVALID_FACTOR"));
  c.scenario = StageTransferDelay{"CamelCargo", StageId::WaitToWorker, -3.0, std::nullopt};
  EXPECT_TRUE(has_code(validate_config(c), "NEGATIVE_DELAY"));
  c.scenario = SupplierProcessingDelay{"Nobody", 1.6, true};
  EXPECT_TRUE(has_code(validate_config(c), "UNKNOWN_RESOURCE"));
}

TEST(ApplyScenario, NoneIsIdentity) {
  SimConfig c;
  EXPECT_EQ(apply_scenario(c, NoScenario{}), c);
}

TEST(ApplyScenario, UnknownResourceThrows) {
  try {
    apply_scenario(SimConfig{}, DegradedForklift{"FL_99", 2.0});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownResource);
  }
}

TEST(ApplyScenario, DegradedForkliftScalesPlacement) {
  const auto base = run_simulation(seeded(3));
  const auto slow = run_simulation(apply_scenario(seeded(3), DegradedForklift{"FL_00", 1.8}));
  auto placement_means = [](const EventLog& log) {
    std::vector<double> xs;
    for (const auto& p : log.packages)
      if (p.forklift_id == "FL_00") xs.push_back(p.fl_placement_end - p.fl_placement_start);
    return mean_of(xs);
  };
  EXPECT_NEAR(placement_means(slow) / placement_means(base), 1.8, 1e-9);
}

TEST(ApplyScenario, StageDelayScalesWaitToWorker) {
  auto cfg = apply_scenario(seeded(5), StageTransferDelay{"CamelCargo", StageId::WaitToWorker,
                                                          std::nullopt, 2.5});
  const auto log = run_simulation(cfg);
  std::vector<double> camel, others;
  for (const auto& p : log.packages)
    (p.supplier_id == "CamelCargo" ? camel : others)
        .push_back(p.worker_pick_up_start - p.discharge_start);
  EXPECT_GT(mean_of(camel), 2.0 * mean_of(others));
}

TEST(Simulation, RejectsInvalidConfig) {
  SimConfig c;
  c.workers = 10;
  try {
    run_simulation(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
  }
}

TEST(Simulation, DefaultRunBounds) {
  const auto log = run_simulation(SimConfig{});
  EXPECT_GE(log.packages.size(), 150u);
  EXPECT_LE(log.packages.size(), 175u);
  EXPECT_TRUE(check_log(log).empty()) << describe(check_log(log));
  std::set<std::tuple<std::string, int, int>> slots;
  for (const auto& p : log.packages) {
    EXPECT_TRUE(slots.emplace(p.block_id, p.bay, p.shelf).second) << p.package_id;
    EXPECT_LT(p.bay, 15);
    EXPECT_LT(p.shelf, 3);
  }
}

TEST(Simulation, PlacementDurationWithinStorageRange) {
  const auto log = run_simulation(SimConfig{});
  const double travel = travel_time(20.0, 5.0);
  for (const auto& p : log.packages) {
    const double d = p.fl_placement_end - p.fl_placement_start;
    EXPECT_GE(d, travel + 60.0);
    EXPECT_LE(d, travel + 90.0);
  }
}

TEST(Simulation, Deterministic) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto a = run_simulation(seeded(seed));
    const auto b = run_simulation(seeded(seed));
    EXPECT_EQ(export_log_jsonl(a), export_log_jsonl(b));
    EXPECT_EQ(a, b);
  }
  EXPECT_NE(export_log_jsonl(run_simulation(seeded(1))), export_log_jsonl(run_simulation(seeded(2))));
}

TEST(Simulation, DockConcurrencyNeverExceedsLimit) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto log = run_simulation(seeded(seed));
    std::vector<std::pair<double, int>> sweep;
    for (const auto& s : log.supplier_records) {
      sweep.emplace_back(s.discharge_start, +1);
      sweep.emplace_back(s.discharge_end, -1);
    }
    std::sort(sweep.begin(), sweep.end());  // ends sort before starts at equal times
    int active = 0, peak = 0;
    for (const auto& [t, d] : sweep) peak = std::max(peak, active += d);
    EXPECT_LE(peak, 3) << "seed " << seed;
  }
}

TEST(Simulation, TeamIsExclusivePerSupplier) {
  const auto log = run_simulation(SimConfig{});
  std::map<std::string, std::set<int>> teams;
  for (const auto& p : log.packages) teams[p.supplier_id].insert(std::stoi(p.worker_id.substr(3)) / 4);
  for (const auto& [s, ts] : teams) EXPECT_EQ(ts.size(), 1u) << s;
}

TEST(Simulation, ForkliftQueueIsFifo) {
  const auto log = run_simulation(seeded(11));
  std::map<std::string, std::vector<const PackageTrace*>> by_fl;
  for (const auto& p : log.packages) by_fl[p.forklift_id].push_back(&p);
  for (auto& [fl, ps] : by_fl) {
    std::stable_sort(ps.begin(), ps.end(), [](auto* a, auto* b) { return a->agv_journey_end < b->agv_journey_end; });
    for (std::size_t i = 1; i < ps.size(); ++i)
      EXPECT_LE(ps[i - 1]->fl_placement_start, ps[i]->fl_placement_start) << fl;
  }
}

TEST(Simulation, AgvDispatchIsFifo) {
  const auto log = run_simulation(seeded(12));
  std::vector<const PackageTrace*> ps;
  for (const auto& p : log.packages) ps.push_back(&p);
  std::stable_sort(ps.begin(), ps.end(),
                   [](auto* a, auto* b) { return a->worker_pick_up_end < b->worker_pick_up_end; });
  for (std::size_t i = 1; i < ps.size(); ++i)
    EXPECT_LE(ps[i - 1]->agv_journey_start, ps[i]->agv_journey_start);
}

TEST(Simulation, BusyIntervalsMatchTraces) {
  const auto log = run_simulation(seeded(4));
  std::size_t total = 0;
  for (const auto& [res, intervals] : log.resource_busy_intervals) total += intervals.size();
  EXPECT_EQ(total, 3 * log.packages.size());
  for (const auto& p : log.packages) {
    const auto& agv = log.resource_busy_intervals.at(p.agv_id);
    auto hit = std::find(agv.begin(), agv.end(), busy_interval(p, ResourceClass::Agv));
    EXPECT_NE(hit, agv.end());
  }
}

TEST(Simulation, MonotonePerturbation) {
  auto mean_wait = [](double m) {
    auto cfg = apply_scenario(seeded(8), StageTransferDelay{"DeltaDrops", StageId::WaitToWorker,
                                                            std::nullopt, m});
    std::vector<double> xs;
    for (const auto& p : run_simulation(cfg).packages)
      if (p.supplier_id == "DeltaDrops") xs.push_back(p.worker_pick_up_start - p.discharge_start);
    return mean_of(xs);
  };
  EXPECT_LE(mean_wait(1.5), mean_wait(2.0));
  EXPECT_LE(mean_wait(2.0), mean_wait(3.0));
}

TEST(Simulation, EmptySupplierList) {
  SimConfig c;
  c.suppliers.clear();
  const auto log = run_simulation(c);
  EXPECT_TRUE(log.packages.empty());
  EXPECT_TRUE(log.supplier_records.empty());
}

TEST(Simulation, StorageFullWhenBlockTooSmall) {
  SimConfig c;
  c.bays_per_block = 2;
  c.shelves_per_bay = 1;
  try {
    run_simulation(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StorageFull);
  }
}

TEST(Simulation, MisallocationRestrictsBlocks) {
  auto cfg = apply_scenario(SimConfig{}, SupplierProcessingDelay{"AuroraFarms", 1.6, true});
  const auto log = run_simulation(cfg);
  for (const auto& p : log.packages) {
    if (p.supplier_id == "AuroraFarms") {
      EXPECT_LE(p.block_id, std::string("C"));
    }
  }
}

TEST(LogIo, JsonlRoundTrip) {
  auto cfg = apply_scenario(seeded(21), DegradedForklift{"FL_02", 1.8});
  const auto log = run_simulation(cfg);
  const auto text = export_log_jsonl(log);
  const auto back = import_log_jsonl(text);
  EXPECT_EQ(back, log);
  EXPECT_EQ(export_log_jsonl(back), text);
}

TEST(LogIo, IsoRenderingRoundTripsToMicroseconds) {
  const auto log = run_simulation(seeded(22));
  const auto back = import_log_jsonl(export_log_jsonl(log, {true, std::string(kDefaultEpoch)}));
  ASSERT_EQ(back.packages.size(), log.packages.size());
  for (std::size_t i = 0; i < log.packages.size(); ++i)
    EXPECT_NEAR(back.packages[i].fl_placement_end, log.packages[i].fl_placement_end, 1e-6);
  EXPECT_NE(export_log_jsonl(log, {true, std::string(kDefaultEpoch)}).find("2024-01-01T"),
            std::string::npos);
}

TEST(LogIo, TruncatedLineReportsLineNumber) {
  auto text = export_log_jsonl(run_simulation(SimConfig{}));
  auto third = text.find('\n', text.find('\n', text.find('\n') + 1) + 1);
  text = text.substr(0, third - 10);
  try {
    import_log_jsonl(text);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LogIo, CsvHasOneRowPerPackage) {
  const auto log = run_simulation(SimConfig{});
  const auto csv = export_log_csv(log);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), log.packages.size() + 1);
  EXPECT_EQ(csv.substr(0, csv.find(',')), "package_id");
}

TEST(ScenarioText, Parses) {
  auto s = parse_scenario("stage-delay:CamelCargo:WaitToWorker:x2.5");
  auto* d = std::get_if<StageTransferDelay>(&s);
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->supplier_id, "CamelCargo");
  EXPECT_EQ(*d->multiplier, 2.5);
  s = parse_scenario("degraded-forklift:FL_00");
  EXPECT_EQ(std::get<DegradedForklift>(s).slowdown_factor, 1.8);
  EXPECT_TRUE(std::holds_alternative<NoScenario>(parse_scenario("none")));
  EXPECT_THROW(parse_scenario("stage-delay:X:NoSuchStage"), Error);
}

TEST(ConfigJson, RoundTrip) {
  SimConfig c = seeded(77);
  c.scenario = SupplierProcessingDelay{"AuroraFarms", 1.7, false};
  nlohmann::json j = c;
  EXPECT_EQ(j.get<SimConfig>(), c);
  auto partial = nlohmann::json::parse(R"({"seed": 3, "suppliers": ["A", "B"]})").get<SimConfig>();
  EXPECT_EQ(partial.seed, 3u);
  ASSERT_EQ(partial.suppliers.size(), 2u);
  EXPECT_EQ(partial.agvs, 20);
}
