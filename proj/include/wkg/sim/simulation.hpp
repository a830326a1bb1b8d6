#pragma once
// Discrete-event simulation of the supplier -> worker -> AGV -> forklift ->
// storage flow.
//
// Events are totally ordered by (time, sequence number). Randomness comes from
// a single std::mt19937_64 stream seeded with SimConfig::seed and consumed in a
// fixed order:
//   1. package count per supplier, in supplier order
//   2. storage duration per package, in package_id order
//   3. AGV distance jitter per package, in package_id order (only when
//      agv_distance_jitter > 0)

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wkg/error.hpp"
#include "wkg/sim/config.hpp"
#include "wkg/sim/event_log.hpp"

namespace wkg::sim {

namespace detail {

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int int_draw(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

// Scenario hooks applied on top of the nominal durations.
class DurationModel {
 public:
  explicit DurationModel(const SimConfig& c) : c_(c) {}

  double carry(const std::string& supplier) const {
    double t = travel_time(c_.layout.dock_to_waiting_point, c_.worker_speed);
    if (auto* p = std::get_if<SupplierProcessingDelay>(&c_.scenario); p && p->supplier_id == supplier)
      t *= p->handling_multiplier;
    return stage_adjust(supplier, StageId::WorkerCarry, t);
  }

  double worker_return() const {
    return travel_time(c_.layout.dock_to_waiting_point, c_.worker_speed);
  }

  // Extra time before a worker of `supplier`'s team is dispatched again.
  double redispatch_delay(const std::string& supplier, double cycle) const {
    return hold(supplier, StageId::WaitToWorker, cycle);
  }

  double agv_trip(const std::string& supplier, double distance) const {
    return stage_adjust(supplier, StageId::AgvTransport, travel_time(distance, c_.agv_speed));
  }

  double agv_return(double distance) const { return travel_time(distance, c_.agv_speed); }

  double agv_hold(const std::string& supplier, double trip) const {
    return hold(supplier, StageId::WaitAtWaitingPoint, trip);
  }

  double placement(const std::string& supplier, const std::string& forklift,
                   double storage) const {
    double t = travel_time(c_.forklift_travel_distance, c_.forklift_speed) + storage;
    t *= forklift_factor(forklift);
    return stage_adjust(supplier, StageId::ForkliftPlacement, t);
  }

  double forklift_return(const std::string& forklift) const {
    return travel_time(c_.forklift_travel_distance, c_.forklift_speed) * forklift_factor(forklift);
  }

  // Non-productive recovery after each task of a degraded forklift,
  // (f - 1) x the nominal task time. Not a busy interval.
  double forklift_recovery(const std::string& forklift, double placement) const {
    const double f = forklift_factor(forklift);
    return f > 1.0 ? placement * (f - 1.0) / f : 0.0;
  }

  double forklift_hold(const std::string& supplier, double placement) const {
    return hold(supplier, StageId::WaitForForklift, placement);
  }

  bool misallocated(const std::string& supplier) const {
    auto* p = std::get_if<SupplierProcessingDelay>(&c_.scenario);
    return p && p->misallocation && p->supplier_id == supplier;
  }

 private:
  const StageTransferDelay* delay_for(const std::string& supplier, StageId stage) const {
    auto* d = std::get_if<StageTransferDelay>(&c_.scenario);
    return (d && d->supplier_id == supplier && d->stage == stage) ? d : nullptr;
  }

  double stage_adjust(const std::string& supplier, StageId stage, double t) const {
    if (auto* d = delay_for(supplier, stage)) {
      if (d->multiplier) return t * *d->multiplier;
      if (d->added_delay) return t + *d->added_delay;
    }
    return t;
  }

  // Wait stages have no nominal latency; a multiplier m adds (m - 1) times the
  // service cycle that ends the wait.
  double hold(const std::string& supplier, StageId stage, double cycle) const {
    if (auto* d = delay_for(supplier, stage)) {
      if (d->multiplier) return (*d->multiplier - 1.0) * cycle;
      if (d->added_delay) return *d->added_delay;
    }
    return 0.0;
  }

  double forklift_factor(const std::string& forklift) const {
    auto* f = std::get_if<DegradedForklift>(&c_.scenario);
    return (f && f->forklift_id == forklift) ? f->slowdown_factor : 1.0;
  }

  const SimConfig& c_;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config) : c_(config), model_(c_), rng_(config.seed) {}

  EventLog run() {
    create_packages();
    for (std::size_t s = 0; s < c_.suppliers.size(); ++s)
      push(c_.suppliers[s].arrival_offset, Kind::SupplierArrive, static_cast<int>(s));

    while (!events_.empty()) {
      Event e = events_.top();
      events_.pop();
      now_ = e.time;
      switch (e.kind) {
        case Kind::SupplierArrive: on_supplier_arrive(e.a); break;
        case Kind::DischargeBegin: on_discharge_begin(e.a); break;
        case Kind::DischargeEnd: on_discharge_end(e.a); break;
        case Kind::WorkerReady: on_worker_ready(e.a, e.b); break;
        case Kind::AtWaitingPoint: on_at_waiting_point(e.a); break;
        case Kind::AgvReturned: on_agv_returned(e.a); break;
        case Kind::AtPickupPoint: on_at_pickup_point(e.a); break;
        case Kind::ForkliftReady: on_forklift_ready(e.a); break;
      }
    }

    EventLog log;
    log.config_snapshot = c_;
    log.packages = std::move(packages_);
    for (std::size_t s = 0; s < c_.suppliers.size(); ++s)
      log.supplier_records.push_back({c_.suppliers[s].id, suppliers_[s].arrival,
                                      suppliers_[s].discharge_start, suppliers_[s].discharge_end});
    log.resource_busy_intervals = busy_intervals_from_traces(log.packages);
    return log;
  }

 private:
  enum class Kind {
    SupplierArrive,
    DischargeBegin,
    DischargeEnd,
    WorkerReady,
    AtWaitingPoint,
    AgvReturned,
    AtPickupPoint,
    ForkliftReady,
  };

  struct Event {
    double time;
    std::uint64_t seq;
    Kind kind;
    int a;
    int b;
  };

  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      return x.seq > y.seq;
    }
  };

  struct SupplierState {
    std::deque<int> truck;  // package indices still on the truck
    int team = -1;
    double arrival = 0.0;
    double discharge_start = 0.0;
    double discharge_end = 0.0;
  };

  struct WorkerState {
    int supplier = -1;
    double free_at = 0.0;
    std::uint64_t token = 0;  // invalidates stale WorkerReady events
  };

  struct AgvState {
    bool idle = true;
    double idle_since = 0.0;
  };

  struct ForkliftState {
    bool idle = true;
    std::deque<int> queue;
  };

  void push(double time, Kind kind, int a, int b = 0) {
    events_.push(Event{time, seq_++, kind, a, b});
  }

  void create_packages() {
    const int n_sup = static_cast<int>(c_.suppliers.size());
    std::vector<int> counts(static_cast<std::size_t>(n_sup));
    for (auto& n : counts)
      n = int_draw(rng_, c_.packages_per_supplier.lo, c_.packages_per_supplier.hi);
    int total = 0;
    for (int n : counts) total += n;
    int width = 4;
    for (int t = total; t >= 10000; t /= 10) ++width;

    suppliers_.resize(static_cast<std::size_t>(n_sup));
    int index = 0;
    for (int s = 0; s < n_sup; ++s) {
      for (int k = 0; k < counts[static_cast<std::size_t>(s)]; ++k, ++index) {
        PackageTrace p;
        p.package_id = package_id(index + 1, width);
        p.supplier_id = c_.suppliers[static_cast<std::size_t>(s)].id;
        const bool restricted = model_.misallocated(p.supplier_id);
        block_of_.push_back(index % (restricted ? eligible_blocks() : c_.blocks));
        p.block_id = c_.block_id(block_of_.back());
        packages_.push_back(std::move(p));
        supplier_of_.push_back(s);
        suppliers_[static_cast<std::size_t>(s)].truck.push_back(index);
      }
    }
    storage_draw_.resize(packages_.size());
    for (auto& d : storage_draw_)
      d = c_.storage_duration.lo + unit_draw(rng_) * (c_.storage_duration.hi - c_.storage_duration.lo);
    agv_distance_.resize(packages_.size());
    for (std::size_t i = 0; i < packages_.size(); ++i) {
      double d = c_.block_distance(block_of_[i]);
      if (c_.agv_distance_jitter > 0.0)
        d += (2.0 * unit_draw(rng_) - 1.0) * c_.agv_distance_jitter;
      agv_distance_[i] = d;
    }

    workers_.resize(static_cast<std::size_t>(c_.workers));
    agvs_.resize(static_cast<std::size_t>(c_.agvs));
    forklifts_.resize(static_cast<std::size_t>(c_.forklifts));
    free_docks_ = c_.max_docks;
    for (int t = 0; t < c_.teams(); ++t) free_teams_.insert(t);
  }

  // Misallocated suppliers only reach the first half of the blocks (and so
  // only their dedicated forklifts).
  int eligible_blocks() const { return std::max(1, (c_.blocks + 1) / 2); }

  const std::string& supplier_name(int s) const {
    return c_.suppliers[static_cast<std::size_t>(s)].id;
  }

  // ---- stage 1: docks ----

  void on_supplier_arrive(int s) {
    suppliers_[static_cast<std::size_t>(s)].arrival = now_;
    dock_queue_.push_back(s);
    assign_docks();
  }

  void assign_docks() {
    while (free_docks_ > 0 && !free_teams_.empty() && !dock_queue_.empty()) {
      int s = dock_queue_.front();
      dock_queue_.pop_front();
      --free_docks_;
      int team = *free_teams_.begin();
      free_teams_.erase(free_teams_.begin());
      suppliers_[static_cast<std::size_t>(s)].team = team;
      push(now_ + travel_time(c_.layout.parking_to_dock, c_.supplier_speed), Kind::DischargeBegin, s);
    }
  }

  void on_discharge_begin(int s) {
    auto& sup = suppliers_[static_cast<std::size_t>(s)];
    sup.discharge_start = now_;
    if (sup.truck.empty()) {
      sup.discharge_end = now_;
      push(now_, Kind::DischargeEnd, s);
      return;
    }
    for (int k = 0; k < c_.team_size; ++k) {
      int w = sup.team * c_.team_size + k;
      auto& worker = workers_[static_cast<std::size_t>(w)];
      worker.supplier = s;
      push(std::max(now_, worker.free_at), Kind::WorkerReady, w, static_cast<int>(++worker.token));
    }
  }

  void on_discharge_end(int s) {
    auto& sup = suppliers_[static_cast<std::size_t>(s)];
    ++free_docks_;
    free_teams_.insert(sup.team);
    assign_docks();
  }

  // ---- stage 2: workers ----

  void on_worker_ready(int w, int token) {
    auto& worker = workers_[static_cast<std::size_t>(w)];
    if (static_cast<std::uint64_t>(token) != worker.token || worker.supplier < 0) return;
    auto& sup = suppliers_[static_cast<std::size_t>(worker.supplier)];
    if (sup.truck.empty()) return;

    int p = sup.truck.front();
    sup.truck.pop_front();
    const auto& name = supplier_name(worker.supplier);
    auto& pkg = packages_[static_cast<std::size_t>(p)];
    pkg.worker_id = c_.worker_id(w);
    pkg.supplier_arrival = sup.arrival;
    pkg.discharge_start = sup.discharge_start;
    pkg.worker_pick_up_start = now_;
    const double carry = model_.carry(name);
    pkg.worker_pick_up_end = now_ + carry;
    push(pkg.worker_pick_up_end, Kind::AtWaitingPoint, p);

    const double back = model_.worker_return();
    worker.free_at = pkg.worker_pick_up_end + back + model_.redispatch_delay(name, carry + back);
    if (sup.truck.empty()) {
      sup.discharge_end = pkg.worker_pick_up_end;
      push(sup.discharge_end, Kind::DischargeEnd, worker.supplier);
    } else {
      push(worker.free_at, Kind::WorkerReady, w, static_cast<int>(++worker.token));
    }
  }

  // ---- stage 3: AGVs ----

  void on_at_waiting_point(int p) {
    agv_queue_.push_back(p);
    dispatch_agvs();
  }

  void on_agv_returned(int a) {
    auto& agv = agvs_[static_cast<std::size_t>(a)];
    agv.idle = true;
    agv.idle_since = now_;
    dispatch_agvs();
  }

  // Longest-idle AGV, ties by index.
  int pick_idle_agv() const {
    int best = -1;
    for (int a = 0; a < c_.agvs; ++a) {
      const auto& agv = agvs_[static_cast<std::size_t>(a)];
      if (!agv.idle) continue;
      if (best < 0 || agv.idle_since < agvs_[static_cast<std::size_t>(best)].idle_since) best = a;
    }
    return best;
  }

  void dispatch_agvs() {
    for (auto it = agv_queue_.begin(); it != agv_queue_.end();) {
      const int p = *it;
      const auto& name = supplier_name(supplier_of_[static_cast<std::size_t>(p)]);
      const int a = pick_idle_agv();
      if (a < 0) {
        ++it;
        continue;
      }
      auto& agv = agvs_[static_cast<std::size_t>(a)];
      agv.idle = false;
      auto& pkg = packages_[static_cast<std::size_t>(p)];
      const double distance = agv_distance_[static_cast<std::size_t>(p)];
      const double trip = model_.agv_trip(name, distance);
      pkg.agv_id = c_.agv_id(a);
      pkg.agv_arrival = now_;
      pkg.agv_journey_start = now_ + model_.agv_hold(name, trip);
      pkg.agv_journey_end = pkg.agv_journey_start + trip;
      push(pkg.agv_journey_end, Kind::AtPickupPoint, p);
      push(pkg.agv_journey_end + model_.agv_return(distance), Kind::AgvReturned, a);
      it = agv_queue_.erase(it);
    }
  }

  // ---- stage 4: forklifts ----

  int forklift_for(int block) const { return c_.block_dedicated_forklifts ? block : block % c_.forklifts; }

  void on_at_pickup_point(int p) {
    const int f = forklift_for(block_of_[static_cast<std::size_t>(p)]);
    forklifts_[static_cast<std::size_t>(f)].queue.push_back(p);
    start_forklift(f);
  }

  void on_forklift_ready(int f) {
    forklifts_[static_cast<std::size_t>(f)].idle = true;
    start_forklift(f);
  }

  void start_forklift(int f) {
    auto& fl = forklifts_[static_cast<std::size_t>(f)];
    if (!fl.idle || fl.queue.empty()) return;
    const int p = fl.queue.front();
    fl.queue.pop_front();
    fl.idle = false;

    auto& pkg = packages_[static_cast<std::size_t>(p)];
    const auto& name = supplier_name(supplier_of_[static_cast<std::size_t>(p)]);
    const std::string fid = c_.forklift_id(f);
    const int block = block_of_[static_cast<std::size_t>(p)];
    auto& slots = stored_[block];
    if (slots >= c_.block_capacity())
      throw Error(ErrorCode::StorageFull, "block " + c_.block_id(block) + " is full");
    pkg.bay = slots / c_.shelves_per_bay;
    pkg.shelf = slots % c_.shelves_per_bay;
    ++slots;

    const double placement = model_.placement(name, fid, storage_draw_[static_cast<std::size_t>(p)]);
    pkg.forklift_id = fid;
    pkg.fl_placement_start = now_ + model_.forklift_hold(name, placement);
    pkg.fl_placement_end = pkg.fl_placement_start + placement;
    push(pkg.fl_placement_end + model_.forklift_return(fid) + model_.forklift_recovery(fid, placement),
         Kind::ForkliftReady, f);
  }

  const SimConfig& c_;
  DurationModel model_;
  std::mt19937_64 rng_;

  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  std::vector<PackageTrace> packages_;
  std::vector<int> supplier_of_;
  std::vector<int> block_of_;
  std::vector<double> storage_draw_;
  std::vector<double> agv_distance_;

  std::vector<SupplierState> suppliers_;
  std::deque<int> dock_queue_;
  int free_docks_ = 0;
  std::set<int> free_teams_;
  std::vector<WorkerState> workers_;
  std::vector<AgvState> agvs_;
  std::deque<int> agv_queue_;
  std::vector<ForkliftState> forklifts_;
  std::map<int, int> stored_;
};

}  // namespace detail

inline EventLog run_simulation(const SimConfig& config) {
  auto violations = validate_config(config);
  if (!violations.empty()) throw Error(ErrorCode::ConfigInvalid, describe(violations));
  return detail::Simulator(config).run();
}

}  // namespace wkg::sim
