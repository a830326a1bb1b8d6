#pragma once
// Directory-per-run persistence.
//
//   <root>/<run_id>/run.json          RunRecord
//   <root>/<run_id>/log.jsonl         after simulate
//   <root>/<run_id>/graph.jsonl       after build_graph
//   <root>/<run_id>/traces/<iid>.json investigation traces
//
// Run ids are ULIDs: 48-bit millisecond timestamp plus 80 random bits in
// Crockford base32, so lexicographic order is creation order.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/kg/graph_io.hpp"
#include "wkg/sim/log_io.hpp"
#include "wkg/sim/simulation.hpp"

namespace wkg::service {

enum class RunStatus { Created, Simulated, Graphed };

inline std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Created: return "created";
    case RunStatus::Simulated: return "simulated";
    case RunStatus::Graphed: return "graphed";
  }
  return "created";
}

inline RunStatus parse_status(std::string_view s) {
  if (s == "created") return RunStatus::Created;
  if (s == "simulated") return RunStatus::Simulated;
  if (s == "graphed") return RunStatus::Graphed;
  throw Error(ErrorCode::ParseFailure, "unknown run status '" + std::string(s) + "'");
}

class UlidGenerator {
 public:
  UlidGenerator() : rng_(std::random_device{}()) {}

  std::string next() {
    std::lock_guard<std::mutex> lock(mu_);
    const auto ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
            .count());
    if (ms > last_ms_) {
      last_ms_ = ms;
      for (auto& b : random_) b = static_cast<std::uint8_t>(rng_() & 0x1f);
    } else {
      // Same millisecond: bump the random part so ids stay strictly increasing.
      for (int i = static_cast<int>(random_.size()) - 1; i >= 0; --i) {
        auto& b = random_[static_cast<std::size_t>(i)];
        if (++b < 32) break;
        b = 0;
      }
    }
    static constexpr char kAlphabet[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";
    std::string out(26, '0');
    std::uint64_t t = last_ms_;
    for (int i = 9; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kAlphabet[t & 0x1f];
      t >>= 5;
    }
    for (std::size_t i = 0; i < random_.size(); ++i) out[10 + i] = kAlphabet[random_[i]];
    return out;
  }

 private:
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::uint64_t last_ms_ = 0;
  std::array<std::uint8_t, 16> random_{};
};

inline bool is_ulid(std::string_view s) {
  if (s.size() != 26) return false;
  for (char c : s)
    if (!((c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z' && c != 'I' && c != 'L' && c != 'O' && c != 'U')))
      return false;
  return true;
}

struct RunRecord {
  std::string run_id;
  sim::SimConfig config;
  std::string created_at;
  RunStatus status = RunStatus::Created;
  std::string log_path;
  std::string graph_path;
  std::string traces_dir;
  std::size_t packages = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

inline nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json artifacts = nlohmann::json::object();
  if (r.status != RunStatus::Created) artifacts["log"] = r.log_path;
  if (r.status == RunStatus::Graphed) artifacts["graph"] = r.graph_path;
  artifacts["traces"] = r.traces_dir;
  nlohmann::json j{{"run_id", r.run_id},   {"created_at", r.created_at}, {"status", status_name(r.status)},
                   {"config", r.config},   {"artifacts", artifacts},     {"packages", r.packages},
                   {"nodes", r.nodes},     {"edges", r.edges}};
  return j;
}

class RunStore {
 public:
  explicit RunStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + root_.string() + ": " + ec.message());
  }

  const std::filesystem::path& root() const { return root_; }

  RunRecord create(const sim::SimConfig& config) {
    if (auto v = sim::validate_config(config); !v.empty()) throw Error(ErrorCode::ConfigInvalid, sim::describe(v));
    RunRecord r;
    r.run_id = ids_.next();
    r.config = config;
    const auto now = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
    r.created_at = format_iso8601(std::floor(now * 1000.0) / 1000.0);
    const auto dir = root_ / r.run_id;
    r.log_path = (dir / "log.jsonl").string();
    r.graph_path = (dir / "graph.jsonl").string();
    r.traces_dir = (dir / "traces").string();
    std::filesystem::create_directories(r.traces_dir);
    save(r);
    return r;
  }

  RunRecord get(const std::string& run_id) const {
    const auto path = record_path(run_id);
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::NotFound, "unknown run '" + run_id + "'");
    const auto j = nlohmann::json::parse(kg::read_text_file(path.string()), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseFailure, "corrupt run record " + path.string());
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.created_at = j.at("created_at").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    sim::from_json(j.at("config"), r.config);
    const auto dir = root_ / r.run_id;
    r.log_path = (dir / "log.jsonl").string();
    r.graph_path = (dir / "graph.jsonl").string();
    r.traces_dir = (dir / "traces").string();
    r.packages = j.value("packages", std::size_t{0});
    r.nodes = j.value("nodes", std::size_t{0});
    r.edges = j.value("edges", std::size_t{0});
    return r;
  }

  // Newest first.
  std::vector<RunRecord> list() const {
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(root_))
      if (entry.is_directory() && is_ulid(entry.path().filename().string()) &&
          std::filesystem::exists(entry.path() / "run.json"))
        ids.push_back(entry.path().filename().string());
    std::sort(ids.rbegin(), ids.rend());
    std::vector<RunRecord> out;
    for (const auto& id : ids) out.push_back(get(id));
    return out;
  }

  // Re-simulating a run that already has a log requires `force`; doing so
  // discards the graph built from the old log.
  RunRecord simulate(const std::string& run_id, bool force = false) {
    auto lock = lock_run(run_id);
    RunRecord r = get(run_id);
    if (r.status != RunStatus::Created && !force)
      throw Error(ErrorCode::WrongState, "run " + run_id + " is already " + std::string(status_name(r.status)));
    const auto log = sim::run_simulation(r.config);
    std::filesystem::remove(r.graph_path);
    write_atomic(r.log_path, sim::export_log_jsonl(log));
    r.status = RunStatus::Simulated;
    r.packages = log.packages.size();
    r.nodes = r.edges = 0;
    save(r);
    return r;
  }

  RunRecord build_graph(const std::string& run_id, bool force = false) {
    auto lock = lock_run(run_id);
    RunRecord r = get(run_id);
    if (r.status == RunStatus::Created) throw Error(ErrorCode::WrongState, "run " + run_id + " has not been simulated");
    if (r.status == RunStatus::Graphed && !force)
      throw Error(ErrorCode::WrongState, "run " + run_id + " already has a graph");
    const auto graph = kg::build_graph(load_log(r));
    write_atomic(r.graph_path, kg::export_graph(graph, kg::GraphFormat::Jsonl));
    r.status = RunStatus::Graphed;
    r.nodes = graph.node_count();
    r.edges = graph.edge_count();
    save(r);
    return r;
  }

  // Artifact reads take no run lock: files are only ever replaced whole.
  sim::EventLog load_log(const RunRecord& r) const {
    if (r.status == RunStatus::Created) throw Error(ErrorCode::WrongState, "run " + r.run_id + " has not been simulated");
    return sim::import_log_jsonl(kg::read_text_file(r.log_path));
  }

  kg::PropertyGraph load_graph(const RunRecord& r) const {
    if (r.status != RunStatus::Graphed) throw Error(ErrorCode::WrongState, "run " + r.run_id + " has no graph yet");
    return kg::import_graph(kg::read_text_file(r.graph_path));
  }

  std::string save_trace(const RunRecord& r, const nlohmann::json& trace) {
    const std::string iid = ids_.next();
    nlohmann::json j = trace;
    j["investigation_id"] = iid;
    j["run_id"] = r.run_id;
    write_atomic((std::filesystem::path(r.traces_dir) / (iid + ".json")).string(), j.dump(2) + "\n");
    return iid;
  }

  nlohmann::json load_trace(const RunRecord& r, const std::string& iid) const {
    const auto path = std::filesystem::path(r.traces_dir) / (iid + ".json");
    if (!is_ulid(iid) || !std::filesystem::exists(path))
      throw Error(ErrorCode::NotFound, "unknown investigation '" + iid + "'");
    return nlohmann::json::parse(kg::read_text_file(path.string()));
  }

 private:
  std::filesystem::path record_path(const std::string& run_id) const {
    if (!is_ulid(run_id)) throw Error(ErrorCode::NotFound, "unknown run '" + run_id + "'");
    return root_ / run_id / "run.json";
  }

  std::unique_lock<std::mutex> lock_run(const std::string& run_id) {
    std::mutex* m;
    {
      std::lock_guard<std::mutex> guard(locks_mu_);
      auto& slot = locks_[run_id];
      if (!slot) slot = std::make_unique<std::mutex>();
      m = slot.get();
    }
    return std::unique_lock<std::mutex>(*m);
  }

  static void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    kg::write_text_file(tmp, content);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + path + ": " + ec.message());
  }

  void save(const RunRecord& r) const { write_atomic(record_path(r.run_id).string(), to_json(r).dump(2) + "\n"); }

  std::filesystem::path root_;
  UlidGenerator ids_;
  std::mutex locks_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace wkg::service
