#pragma once
// Query templates used by the rule planner. Each template pairs a keyword
// signature with one or more query steps and the answer shape of each step.
//
// Placeholders: {{supplier}}, {{agv}}, {{forklift}}, {{worker}} take entity ids
// found in the question; {{prior.NAME}} takes the value NAME from an earlier
// step of the same plan.

#include <string>
#include <vector>

#include "wkg/sim/stage.hpp"

namespace wkg::agent {

struct StepTemplate {
  std::string intent;
  std::string query;
  std::string shape;
};

struct QueryTemplate {
  std::string id;
  std::string category;
  std::string facet;     // empty for plain operational questions
  std::string question;  // reference phrasing, placeholders allowed
  // Every group must contribute at least one phrase found in the question.
  std::vector<std::vector<std::string>> signature;
  std::vector<std::string> slots;
  std::vector<StepTemplate> steps;
};

namespace detail {

inline std::string package_chain(const std::string& supplier_props = "") {
  return "MATCH (s:SUPPLIER" + supplier_props +
         ")-[stw:SUPPLIER_TO_WORKER]->(w:WORKER)-[wta:WORKER_TO_AGV]->(a:AGV)\n"
         "WHERE wta.package_id = stw.package_id\n"
         "MATCH (a)-[atf:AGV_TO_FL]->(f:FL)-[fts:FL_TO_STORAGE]->(b:STORAGE)\n"
         "WHERE atf.package_id = stw.package_id AND fts.package_id = stw.package_id\n";
}

inline std::string stage_expr(sim::StageId s) {
  switch (s) {
    case sim::StageId::WaitToWorker: return "duration_seconds(s.discharge_start, stw.worker_pick_up_start)";
    case sim::StageId::WorkerCarry: return "duration_seconds(stw.worker_pick_up_start, wta.worker_pick_up_end)";
    case sim::StageId::WaitAtWaitingPoint:
      return "duration_seconds(wta.worker_pick_up_end, wta.agv_journey_start)";
    case sim::StageId::AgvTransport: return "duration_seconds(wta.agv_journey_start, atf.agv_journey_end)";
    case sim::StageId::WaitForForklift: return "duration_seconds(atf.agv_journey_end, atf.fl_placement_start)";
    case sim::StageId::ForkliftPlacement: return "duration_seconds(atf.fl_placement_start, fts.fl_placement_end)";
  }
  return "";
}

// Subject and global mean of every stage; `membership` selects subject packages.
inline std::string stage_comparison(const std::string& subject, const std::string& membership) {
  std::string q = package_chain() + "WITH " + membership + " AS mine";
  for (auto s : sim::kAllStages) q += ",\n     " + stage_expr(s) + " AS " + std::string(sim::stage_key(s));
  q += "\nWITH count(CASE WHEN mine THEN 1 END) AS subject_packages";
  for (auto s : sim::kAllStages) {
    const std::string k(sim::stage_key(s));
    q += ",\n     avg(CASE WHEN mine THEN " + k + " END) AS " + k + "_subject, avg(" + k + ") AS " + k + "_global";
  }
  q += "\nRETURN '" + subject + "' AS subject, subject_packages";
  for (auto s : sim::kAllStages) {
    const std::string k(sim::stage_key(s));
    q += ", " + k + "_subject, " + k + "_global";
  }
  return q;
}

inline std::string stage_shape() {
  std::string s = "record:subject,subject_packages";
  for (auto st : sim::kAllStages) {
    const std::string k(sim::stage_key(st));
    s += "," + k + "_subject," + k + "_global";
  }
  return s;
}

// Per-resource busy time over the resource's own active span. `busy`, `start`,
// `end` are expressions over the bindings of `match`.
inline std::string utilization_rows(const std::string& match, const std::string& id, const std::string& busy,
                                    const std::string& start, const std::string& end,
                                    const std::string& mine = "false", const std::string& carry = "") {
  const std::string c = carry.empty() ? "" : ", " + carry;
  return match + "WITH " + id + " AS resource_id, " + busy + " AS busy, " + start + " AS t0, " + end +
         " AS t1, " + mine + " AS mine" + c +
         "\n"
         "WITH resource_id, sum(busy) AS busy_seconds, sum(CASE WHEN mine THEN busy ELSE 0 END) AS "
         "subject_busy_seconds,\n"
         "     duration_seconds(min(t0), max(t1)) AS span_seconds" + c +
         "\n"
         "WITH resource_id, CASE WHEN span_seconds > 0 THEN busy_seconds / span_seconds END AS utilization,\n"
         "     CASE WHEN span_seconds > 0 THEN subject_busy_seconds / span_seconds END AS subject_utilization" + c +
         "\n";
}

inline const char* kAgvTrips =
    "MATCH (:WORKER)-[wta:WORKER_TO_AGV]->(a:AGV)-[atf:AGV_TO_FL]->(:FL)\n"
    "WHERE atf.package_id = wta.package_id\n";
inline const char* kFlTrips =
    "MATCH (:AGV)-[atf:AGV_TO_FL]->(f:FL)-[fts:FL_TO_STORAGE]->(:STORAGE)\n"
    "WHERE fts.package_id = atf.package_id\n";
inline const char* kWorkerTrips =
    "MATCH (:SUPPLIER)-[stw:SUPPLIER_TO_WORKER]->(w:WORKER)-[wta:WORKER_TO_AGV]->(:AGV)\n"
    "WHERE wta.package_id = stw.package_id\n";

inline std::string agv_utilization(const std::string& carry = "") {
  return utilization_rows(kAgvTrips, "a.agv_id", "duration_seconds(wta.agv_journey_start, atf.agv_journey_end)",
                          "wta.agv_journey_start", "atf.agv_journey_end", "false", carry);
}
inline std::string fl_utilization(const std::string& carry = "") {
  return utilization_rows(kFlTrips, "f.forklift_id",
                          "duration_seconds(atf.fl_placement_start, fts.fl_placement_end)",
                          "atf.fl_placement_start", "fts.fl_placement_end", "false", carry);
}
inline std::string worker_utilization(const std::string& carry = "") {
  return utilization_rows(kWorkerTrips, "w.worker_id",
                          "duration_seconds(stw.worker_pick_up_start, wta.worker_pick_up_end)",
                          "stw.worker_pick_up_start", "wta.worker_pick_up_end", "false", carry);
}

// Per-resource utilization next to the class average.
inline std::string class_utilization(std::string (*rows)(const std::string&), const std::string& key) {
  return "CALL {\n" + rows("") + "RETURN avg(utilization) AS global_utilization\n}\n" +
         rows("global_utilization") + "RETURN resource_id AS " + key +
         ", utilization, global_utilization ORDER BY " + key;
}

inline std::string stage_question(const std::string& scope) {
  return "What are the package waiting times at each stage for " + scope +
         " compared to the global average of each stage?";
}

}  // namespace detail

inline const std::vector<QueryTemplate>& query_templates() {
  using namespace detail;
  static const std::vector<QueryTemplate> registry = [] {
    std::vector<QueryTemplate> t;
    const std::string chain = package_chain();

    // ---- supplier ---------------------------------------------------------
    t.push_back({"S1", "SUPPLIER", "",
                 "What is the number of discharge processes that are completed on an hourly basis?",
                 {{"discharge"}, {"hourly", "per hour", "each hour"}, {"number", "how many", "count"}},
                 {},
                 {{"count completed discharges per hour",
                   "MATCH (s:SUPPLIER)\n"
                   "WITH toInteger(toFloat(s.discharge_end) / 3600) AS hour, count(s) AS discharges\n"
                   "RETURN hour, discharges ORDER BY hour",
                   "map:hour:discharges"}}});
    t.push_back({"S2", "SUPPLIER", "",
                 "Where and how many containers discharged from supplier {{supplier}} distributed in each block in "
                 "the storage?",
                 {{"distributed", "distribution"}, {"block"}},
                 {"supplier"},
                 {{"count the supplier's packages per storage block",
                   package_chain(" {supplier_id: '{{supplier}}'}") +
                       "RETURN b.block_id AS block_id, count(fts) AS packages ORDER BY block_id",
                   "map:block_id:packages"}}});
    t.push_back({"S3", "SUPPLIER", "",
                 "Which supplier had the shortest total discharge time and how many packages were moved?",
                 {{"shortest", "fastest", "minimum"}, {"discharge time"}, {"supplier"}},
                 {},
                 {{"rank suppliers by total discharge time",
                   chain +
                       "WITH s, max(fts.fl_placement_end) AS last_end, count(fts) AS packages\n"
                       "RETURN s.supplier_id AS supplier_id, duration_seconds(s.discharge_start, last_end) AS "
                       "total_discharge_seconds, packages\n"
                       "ORDER BY total_discharge_seconds ASC, supplier_id ASC LIMIT 1",
                   "record:supplier_id,total_discharge_seconds,packages"}}});
    t.push_back({"S4", "SUPPLIER", "",
                 "What is the average waiting time for a supplier truck before unloading begins? Which truck waited "
                 "the most?",
                 {{"waiting time", "waited"}, {"truck"}, {"before unloading", "unloading begins", "waited the most"}},
                 {},
                 {{"average truck wait before discharge",
                   "MATCH (s:SUPPLIER)\n"
                   "RETURN avg(duration_seconds(s.arrival_time, s.discharge_start)) AS average_wait_seconds",
                   "record:average_wait_seconds"},
                  {"truck with the longest wait",
                   "MATCH (s:SUPPLIER)\n"
                   "RETURN s.supplier_id AS supplier_id, duration_seconds(s.arrival_time, s.discharge_start) AS "
                   "max_wait_seconds\n"
                   "ORDER BY max_wait_seconds DESC, supplier_id ASC LIMIT 1",
                   "record:supplier_id,max_wait_seconds"}}});
    t.push_back({"S5", "SUPPLIER", "", "Which hour had the most total waiting time during package unload?",
                 {{"hour"}, {"most total waiting", "total waiting time"}},
                 {},
                 {{"sum package waits by pick-up hour",
                   "MATCH (s:SUPPLIER)-[stw:SUPPLIER_TO_WORKER]->(:WORKER)\n"
                   "WITH toInteger(toFloat(stw.worker_pick_up_start) / 3600) AS hour,\n"
                   "     sum(duration_seconds(s.discharge_start, stw.worker_pick_up_start)) AS total_wait_seconds\n"
                   "RETURN hour, total_wait_seconds ORDER BY round(total_wait_seconds, 9) DESC, hour ASC LIMIT 1",
                   "record:hour,total_wait_seconds"}}});

    // ---- worker -----------------------------------------------------------
    t.push_back({"W1", "WORKER", "",
                 "For each person, what was the total number of packages they handled during a shift?",
                 {{"each person", "each worker", "per worker"}, {"number of packages", "handled"}},
                 {},
                 {{"count packages per worker",
                   "MATCH (w:WORKER)-[wta:WORKER_TO_AGV]->(:AGV)\n"
                   "RETURN w.worker_id AS worker_id, count(wta) AS packages ORDER BY worker_id",
                   "map:worker_id:packages"}}});
    t.push_back({"W2", "WORKER", "",
                 "What is the average time taken by a person to move a package from truck to AGV? Who is the most "
                 "efficient person?",
                 {{"average time"}, {"truck to agv"}, {"efficient"}},
                 {},
                 {{"average carry time",
                   std::string(kWorkerTrips) +
                       "RETURN avg(duration_seconds(stw.worker_pick_up_start, wta.worker_pick_up_end)) AS "
                       "average_carry_seconds",
                   "record:average_carry_seconds"},
                  {"worker with the shortest average carry",
                   std::string(kWorkerTrips) +
                       "WITH w.worker_id AS worker_id,\n"
                       "     avg(duration_seconds(stw.worker_pick_up_start, wta.worker_pick_up_end)) AS "
                       "worker_avg_carry_seconds\n"
                       "RETURN worker_id, worker_avg_carry_seconds\n"
                       "ORDER BY round(worker_avg_carry_seconds, 9) ASC, worker_id ASC LIMIT 1",
                   "record:worker_id,worker_avg_carry_seconds"}}});
    t.push_back({"W3", "WORKER", "",
                 "How much time does each worker take to unload all packages from supplier {{supplier}}?",
                 {{"each worker"}, {"unload all packages", "take to unload"}},
                 {"supplier"},
                 {{"total carry time per worker for the supplier",
                   "MATCH (s:SUPPLIER {supplier_id: '{{supplier}}'})-[stw:SUPPLIER_TO_WORKER]->(w:WORKER)"
                   "-[wta:WORKER_TO_AGV]->(:AGV)\n"
                   "WHERE wta.package_id = stw.package_id\n"
                   "RETURN w.worker_id AS worker_id,\n"
                   "       sum(duration_seconds(stw.worker_pick_up_start, wta.worker_pick_up_end)) AS "
                   "total_carry_seconds\n"
                   "ORDER BY worker_id",
                   "map:worker_id:total_carry_seconds"}}});
    t.push_back({"W4", "WORKER", "", "How many workers were used to unload packages from supplier {{supplier}}?",
                 {{"how many workers"}, {"unload", "used"}},
                 {"supplier"},
                 {{"count distinct workers for the supplier",
                   "MATCH (s:SUPPLIER {supplier_id: '{{supplier}}'})-[:SUPPLIER_TO_WORKER]->(w:WORKER)\n"
                   "RETURN count(DISTINCT w) AS workers",
                   "record:workers"}}});
    t.push_back({"W5", "WORKER", "", "Which workers were assigned to most number of suppliers?",
                 {{"workers"}, {"most number of suppliers", "most suppliers"}},
                 {},
                 {{"workers serving the most suppliers",
                   "CALL {\n"
                   "  MATCH (s:SUPPLIER)-[:SUPPLIER_TO_WORKER]->(w:WORKER)\n"
                   "  WITH w, count(DISTINCT s) AS n\n"
                   "  RETURN max(n) AS supplier_count\n"
                   "}\n"
                   "MATCH (s:SUPPLIER)-[:SUPPLIER_TO_WORKER]->(w:WORKER)\n"
                   "WITH w.worker_id AS worker_id, count(DISTINCT s) AS n, supplier_count\n"
                   "WHERE n = supplier_count\n"
                   "WITH worker_id, supplier_count ORDER BY worker_id\n"
                   "RETURN collect(worker_id) AS worker_ids, supplier_count",
                   "record:worker_ids,supplier_count"}}});

    // ---- agv --------------------------------------------------------------
    t.push_back({"A1", "AGV", "", "Which three AGVs processed the least amount of packages?",
                 {{"three agvs", "3 agvs"}, {"least", "fewest"}},
                 {},
                 {{"AGVs with the fewest packages",
                   "MATCH (a:AGV)\n"
                   "CALL { WITH a MATCH (:WORKER)-[r:WORKER_TO_AGV]->(a) RETURN count(r) AS packages }\n"
                   "RETURN a.agv_id AS agv_id, packages ORDER BY packages ASC, agv_id ASC LIMIT 3",
                   "rows:agvs:agv_id,packages"}}});
    t.push_back({"A2", "AGV", "",
                 "What is the average travel time for an AGV to move a package from the dock to its assigned storage "
                 "area?",
                 {{"average travel time"}, {"agv"}},
                 {},
                 {{"average AGV journey",
                   std::string(kAgvTrips) +
                       "RETURN avg(duration_seconds(wta.agv_journey_start, atf.agv_journey_end)) AS "
                       "average_journey_seconds",
                   "record:average_journey_seconds"}}});
    t.push_back({"A3", "AGV", "",
                 "How many trips does each agv make during unloading along with the average journey time?",
                 {{"trips"}, {"each agv"}, {"journey time"}},
                 {},
                 {{"trips and mean journey per AGV",
                   std::string(kAgvTrips) +
                       "RETURN a.agv_id AS agv_id, count(atf) AS trips,\n"
                       "       avg(duration_seconds(wta.agv_journey_start, atf.agv_journey_end)) AS "
                       "average_journey_seconds\n"
                       "ORDER BY agv_id",
                   "map:agv_id:trips,average_journey_seconds"}}});
    t.push_back({"A4", "AGV", "", "How many packages did {{agv}} handle from each supplier?",
                 {{"how many packages"}, {"each supplier"}},
                 {"agv"},
                 {{"count the AGV's packages per supplier",
                   "MATCH (s:SUPPLIER)-[stw:SUPPLIER_TO_WORKER]->(:WORKER)-[wta:WORKER_TO_AGV]->"
                   "(a:AGV {agv_id: '{{agv}}'})\n"
                   "WHERE wta.package_id = stw.package_id\n"
                   "RETURN s.supplier_id AS supplier_id, count(wta) AS packages ORDER BY supplier_id",
                   "map:supplier_id:packages"}}});
    t.push_back({"A5", "AGV", "", "Which AGV was the least utilized?",
                 {{"agv"}, {"least utilized", "under utilized", "underutilized", "lowest utilization"}},
                 {},
                 {{"AGV with the lowest utilization",
                   agv_utilization() +
                       "WHERE utilization IS NOT NULL\n"
                       "RETURN resource_id AS agv_id, utilization ORDER BY round(utilization, 9) ASC, agv_id ASC LIMIT 1",
                   "record:agv_id,utilization"}}});

    // ---- forklift ---------------------------------------------------------
    t.push_back({"F1", "FORKLIFT", "", "Which package waited the longest for a fork lift?",
                 {{"package"}, {"waited the longest", "longest wait"}, {"fork lift", "forklift"}},
                 {},
                 {{"package with the longest forklift wait",
                   "MATCH (:AGV)-[atf:AGV_TO_FL]->(:FL)\n"
                   "RETURN atf.package_id AS package_id,\n"
                   "       duration_seconds(atf.agv_journey_end, atf.fl_placement_start) AS wait_seconds\n"
                   "ORDER BY wait_seconds DESC, package_id ASC LIMIT 1",
                   "record:package_id,wait_seconds"}}});
    t.push_back({"F2", "FORKLIFT", "", "How many packages are handled by each forklift?",
                 {{"how many packages"}, {"each forklift"}},
                 {},
                 {{"count packages per forklift",
                   "MATCH (f:FL)-[fts:FL_TO_STORAGE]->(:STORAGE)\n"
                   "RETURN f.forklift_id AS forklift_id, count(fts) AS packages ORDER BY forklift_id",
                   "map:forklift_id:packages"}}});
    t.push_back({"F3", "FORKLIFT", "", "Which forklift is the most under utilized?",
                 {{"forklift"}, {"under utilized", "underutilized", "least utilized", "lowest utilization"}},
                 {},
                 {{"forklift with the lowest utilization",
                   fl_utilization() +
                       "WHERE utilization IS NOT NULL\n"
                       "RETURN resource_id AS forklift_id, utilization ORDER BY round(utilization, 9) ASC, forklift_id ASC "
                       "LIMIT 1",
                   "record:forklift_id,utilization"}}});
    t.push_back({"F4", "FORKLIFT", "",
                 "What is the average time taken by a forklift to move a package to its assigned storage space?",
                 {{"average time"}, {"forklift"}, {"storage space", "to move a package"}},
                 {},
                 {{"average placement time",
                   std::string(kFlTrips) +
                       "RETURN avg(duration_seconds(atf.fl_placement_start, fts.fl_placement_end)) AS "
                       "average_placement_seconds",
                   "record:average_placement_seconds"}}});
    t.push_back({"F5", "FORKLIFT", "", "What is the utilization rate (percentage of time in use) for each forklift?",
                 {{"utilization rate", "utilization percentage"}, {"each forklift"}},
                 {},
                 {{"utilization percentage per forklift",
                   fl_utilization() +
                       "RETURN resource_id AS forklift_id, utilization * 100.0 AS utilization_percentage "
                       "ORDER BY forklift_id",
                   "map:forklift_id:utilization_percentage"}}});

    // ---- package ----------------------------------------------------------
    t.push_back({"P1", "PACKAGE", "", "Which storage block contains the highest number of containers?",
                 {{"block"}, {"highest number", "most containers", "most packages"}},
                 {},
                 {{"busiest storage block",
                   "MATCH (:FL)-[fts:FL_TO_STORAGE]->(b:STORAGE)\n"
                   "RETURN b.block_id AS block_id, count(fts) AS packages ORDER BY packages DESC, block_id ASC "
                   "LIMIT 1",
                   "record:block_id,packages"}}});
    const std::string discharge_avg =
        chain + "RETURN avg(duration_seconds(stw.worker_pick_up_start, fts.fl_placement_end)) AS "
                "average_discharge_seconds";
    t.push_back({"P2", "PACKAGE", "", "What is the average time a package discharge takes?",
                 {{"average time a package discharge", "package discharge takes"}},
                 {},
                 {{"average package discharge time", discharge_avg, "record:average_discharge_seconds"}}});
    t.push_back({"P3", "PACKAGE", "",
                 "What is the average waiting time for a package to be transferred to a forklift after AGV arrival "
                 "at the storage area?",
                 {{"average waiting time"}, {"transferred to a forklift"}},
                 {},
                 {{"average wait for a forklift",
                   "MATCH (:AGV)-[atf:AGV_TO_FL]->(:FL)\n"
                   "RETURN avg(duration_seconds(atf.agv_journey_end, atf.fl_placement_start)) AS "
                   "average_wait_seconds",
                   "record:average_wait_seconds"}}});
    t.push_back({"P4", "PACKAGE", "",
                 "Which package experienced the longest total time from arrival at the dock to placement in its final "
                 "storage location?",
                 {{"longest total time"}, {"package"}, {"dock"}},
                 {},
                 {{"package with the longest dock-to-storage time",
                   chain +
                       "RETURN stw.package_id AS package_id,\n"
                       "       duration_seconds(s.discharge_start, fts.fl_placement_end) AS total_seconds\n"
                       "ORDER BY total_seconds DESC, package_id ASC LIMIT 1",
                   "record:package_id,total_seconds"}}});
    t.push_back({"P5", "PACKAGE", "",
                 "How many packages took longer than the average unload time and what is the average discharge "
                 "time?",
                 {{"how many packages took longer"}, {"average"}},
                 {},
                 {{"average package discharge time", discharge_avg, "record:average_discharge_seconds"},
                  {"count packages above the average",
                   chain +
                       "WITH duration_seconds(stw.worker_pick_up_start, fts.fl_placement_end) AS span_seconds\n"
                       "WHERE span_seconds > {{prior.average_discharge_seconds}}\n"
                       "RETURN count(*) AS packages_above_average",
                   "record:packages_above_average"}}});
    t.push_back({"P6", "PACKAGE", "", "Which packages were handled by both {{agv}} and {{forklift}}?",
                 {{"handled by both"}},
                 {"agv", "forklift"},
                 {{"packages passed from the AGV to the forklift",
                   "MATCH (:AGV {agv_id: '{{agv}}'})-[atf:AGV_TO_FL]->(:FL {forklift_id: '{{forklift}}'})\n"
                   "WITH atf.package_id AS package_id ORDER BY package_id\n"
                   "RETURN collect(package_id) AS package_ids",
                   "record:package_ids"}}});

    // ---- investigation playbooks -----------------------------------------
    t.push_back({"INV_SUPPLIER_RANKING", "SUPPLIER", "discharge_ranking",
                 "What is the total discharge time of each supplier compared to the global average?",
                 {{"total discharge time"}, {"each supplier"}, {"global average"}},
                 {},
                 {{"total discharge time per supplier against the mean",
                   "CALL {\n" + chain +
                       "WITH s, max(fts.fl_placement_end) AS last_end\n"
                       "RETURN avg(duration_seconds(s.discharge_start, last_end)) AS global_average_seconds\n}\n" +
                       chain +
                       "WITH s, global_average_seconds, max(fts.fl_placement_end) AS last_end\n"
                       "RETURN s.supplier_id AS supplier_id,\n"
                       "       duration_seconds(s.discharge_start, last_end) AS total_discharge_seconds,\n"
                       "       global_average_seconds ORDER BY supplier_id",
                   "map:supplier_id:total_discharge_seconds,global_average_seconds"}}});
    t.push_back({"INV_SUPPLIER_DISCHARGE", "SUPPLIER", "discharge",
                 "What is the total discharge time for supplier {{supplier}} compared to the global average across "
                 "all suppliers?",
                 {{"total discharge time"}, {"compared to the global average"}},
                 {"supplier"},
                 {{"supplier total discharge time against the mean",
                   "CALL {\n" + chain +
                       "WITH s, max(fts.fl_placement_end) AS last_end\n"
                       "RETURN avg(duration_seconds(s.discharge_start, last_end)) AS global_average_seconds\n}\n" +
                       package_chain(" {supplier_id: '{{supplier}}'}") +
                       "WITH s, global_average_seconds, max(fts.fl_placement_end) AS last_end\n"
                       "RETURN s.supplier_id AS subject, duration_seconds(s.discharge_start, last_end) AS "
                       "subject_seconds,\n"
                       "       global_average_seconds",
                   "record:subject,subject_seconds,global_average_seconds"}}});
    t.push_back({"INV_SUPPLIER_WAIT", "SUPPLIER", "supplier_wait",
                 "What is the supplier waiting time for {{supplier}} compared to the global average supplier waiting "
                 "time?",
                 {{"supplier waiting time"}, {"global average"}},
                 {"supplier"},
                 {{"truck wait before discharge against the mean",
                   "CALL {\n"
                   "  MATCH (s:SUPPLIER)\n"
                   "  RETURN avg(duration_seconds(s.arrival_time, s.discharge_start)) AS global_average_seconds\n"
                   "}\n"
                   "MATCH (s:SUPPLIER {supplier_id: '{{supplier}}'})\n"
                   "RETURN s.supplier_id AS subject, duration_seconds(s.arrival_time, s.discharge_start) AS "
                   "subject_seconds,\n"
                   "       global_average_seconds",
                   "record:subject,subject_seconds,global_average_seconds"}}});
    {
      const std::string agv_match =
          "MATCH (s:SUPPLIER)-[stw:SUPPLIER_TO_WORKER]->(:WORKER)-[wta:WORKER_TO_AGV]->(a:AGV)\n"
          "WHERE wta.package_id = stw.package_id\n"
          "MATCH (a)-[atf:AGV_TO_FL]->(:FL)\n"
          "WHERE atf.package_id = stw.package_id\n";
      const std::string mine = "s.supplier_id = '{{supplier}}'";
      const std::string agv = utilization_rows(agv_match, "a.agv_id",
                                               "duration_seconds(wta.agv_journey_start, atf.agv_journey_end)",
                                               "wta.agv_journey_start", "atf.agv_journey_end", mine);
      const std::string fl = utilization_rows(chain, "f.forklift_id",
                                              "duration_seconds(atf.fl_placement_start, fts.fl_placement_end)",
                                              "atf.fl_placement_start", "fts.fl_placement_end", mine);
      t.push_back({"INV_SUPPLIER_UTILIZATION", "SUPPLIER", "utilization",
                   "What are the AGV and forklift utilization rates for supplier {{supplier}} compared to the "
                   "global averages?",
                   {{"utilization"}, {"agv and forklift"}},
                   {"supplier"},
                   {{"supplier share of AGV and forklift utilization",
                     "CALL {\n" + agv +
                         "RETURN avg(subject_utilization) AS agv_subject, avg(utilization) AS agv_global\n}\n"
                         "CALL {\n" +
                         fl +
                         "RETURN avg(subject_utilization) AS fl_subject, avg(utilization) AS fl_global\n}\n"
                         "RETURN '{{supplier}}' AS subject, agv_subject, agv_global, fl_subject, fl_global",
                     "record:subject,agv_subject,agv_global,fl_subject,fl_global"}}});
    }
    t.push_back({"INV_SUPPLIER_STAGES", "SUPPLIER", "stage_deviation", stage_question("supplier {{supplier}}"),
                 {{"each stage"}, {"waiting times"}},
                 {"supplier"},
                 {{"stage means for the supplier against all packages",
                   stage_comparison("{{supplier}}", "s.supplier_id = '{{supplier}}'"), stage_shape()}}});
    {
      std::string q = package_chain(" {supplier_id: '{{supplier}}'}") + "RETURN stw.package_id AS package_id";
      std::string shape = "rows:packages:package_id";
      for (auto st : sim::kAllStages) {
        const std::string k(sim::stage_key(st));
        q += ",\n       " + stage_expr(st) + " AS " + k;
        shape += "," + k;
      }
      q += "\nORDER BY package_id";
      t.push_back({"INV_PACKAGE_STAGES", "PACKAGE", "package_stages",
                   "For each package from supplier {{supplier}}, show its waiting time at each process stage.",
                   {{"each package", "every package"}, {"each process stage", "each stage"}},
                   {"supplier"},
                   {{"stage durations of every package from the supplier", q, shape}}});
    }
    t.push_back({"INV_FORKLIFT_STAGES", "FORKLIFT", "stage_deviation",
                 stage_question("packages handled by forklift {{forklift}}"),
                 {{"each stage"}, {"waiting times"}},
                 {"forklift"},
                 {{"stage means for the forklift's packages against all packages",
                   stage_comparison("{{forklift}}", "f.forklift_id = '{{forklift}}'"), stage_shape()}}});
    t.push_back({"INV_AGV_STAGES", "AGV", "stage_deviation", stage_question("packages handled by {{agv}}"),
                 {{"each stage"}, {"waiting times"}},
                 {"agv"},
                 {{"stage means for the AGV's packages against all packages",
                   stage_comparison("{{agv}}", "a.agv_id = '{{agv}}'"), stage_shape()}}});
    t.push_back({"INV_WORKER_STAGES", "WORKER", "stage_deviation",
                 stage_question("packages handled by worker {{worker}}"),
                 {{"each stage"}, {"waiting times"}},
                 {"worker"},
                 {{"stage means for the worker's packages against all packages",
                   stage_comparison("{{worker}}", "w.worker_id = '{{worker}}'"), stage_shape()}}});
    t.push_back({"INV_FORKLIFT_WAIT", "FORKLIFT", "forklift_wait",
                 "What is the average waiting time for each forklift compared to the global average forklift "
                 "waiting time?",
                 {{"average waiting time"}, {"each forklift"}, {"global average"}},
                 {},
                 {{"mean wait for each forklift against the mean over all packages",
                   "CALL {\n"
                   "  MATCH (:AGV)-[atf:AGV_TO_FL]->(:FL)\n"
                   "  RETURN avg(duration_seconds(atf.agv_journey_end, atf.fl_placement_start)) AS "
                   "global_average_wait_seconds\n"
                   "}\n"
                   "MATCH (:AGV)-[atf:AGV_TO_FL]->(f:FL)\n"
                   "RETURN f.forklift_id AS forklift_id,\n"
                   "       avg(duration_seconds(atf.agv_journey_end, atf.fl_placement_start)) AS "
                   "average_wait_seconds,\n"
                   "       global_average_wait_seconds ORDER BY forklift_id",
                   "map:forklift_id:average_wait_seconds,global_average_wait_seconds"}}});
    t.push_back({"INV_FORKLIFT_UTILIZATION", "FORKLIFT", "utilization",
                 "What is the utilization rate of each forklift compared to the global average forklift "
                 "utilization?",
                 {{"utilization"}, {"each forklift"}, {"global average"}},
                 {},
                 {{"utilization per forklift against the class mean",
                   class_utilization(fl_utilization, "forklift_id"),
                   "map:forklift_id:utilization,global_utilization"}}});
    t.push_back({"INV_AGV_UTILIZATION", "AGV", "utilization",
                 "What is the utilization rate of each AGV compared to the global average AGV utilization?",
                 {{"utilization"}, {"each agv"}, {"global average"}},
                 {},
                 {{"utilization per AGV against the class mean", class_utilization(agv_utilization, "agv_id"),
                   "map:agv_id:utilization,global_utilization"}}});
    t.push_back({"INV_WORKER_UTILIZATION", "WORKER", "utilization",
                 "What is the utilization rate of each worker compared to the global average worker utilization?",
                 {{"utilization"}, {"each worker"}, {"global average"}},
                 {},
                 {{"utilization per worker against the class mean",
                   class_utilization(worker_utilization, "worker_id"),
                   "map:worker_id:utilization,global_utilization"}}});
    return t;
  }();
  return registry;
}

inline const QueryTemplate* find_template(const std::string& id) {
  for (const auto& t : query_templates())
    if (t.id == id) return &t;
  return nullptr;
}

}  // namespace wkg::agent
