#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wkg/agent/types.hpp"
#include "wkg/kg/graph.hpp"

namespace wkg::agent {

struct SchemaDescriptor {
  std::string text;
  // Known ids per label name, e.g. "SUPPLIER" -> {"AuroraFarms", ...}.
  std::map<std::string, std::vector<std::string>> entities;
};

inline SchemaDescriptor describe_schema(const kg::PropertyGraph& g) {
  SchemaDescriptor d;
  d.text =
      "Nodes:\n"
      "  (:SUPPLIER {supplier_id, arrival_time, discharge_start, discharge_end})\n"
      "  (:WORKER {worker_id})\n"
      "  (:AGV {agv_id})\n"
      "  (:FL {forklift_id})\n"
      "  (:STORAGE {block_id})\n"
      "Relationships, one of each per package, all carrying package_id:\n"
      "  (:SUPPLIER)-[:SUPPLIER_TO_WORKER {worker_pick_up_start}]->(:WORKER)\n"
      "  (:WORKER)-[:WORKER_TO_AGV {worker_pick_up_end, agv_arrival, agv_journey_start}]->(:AGV)\n"
      "  (:AGV)-[:AGV_TO_FL {agv_journey_end, fl_placement_start}]->(:FL)\n"
      "  (:FL)-[:FL_TO_STORAGE {fl_placement_end, bay, shelf}]->(:STORAGE)\n"
      "Timestamps are datetimes; duration_seconds(a, b) gives b - a in seconds.\n"
      "Patterns span at most two relationships; join longer chains on package_id.\n";
  for (auto l : kg::kAllLabels) d.entities[std::string(kg::label_name(l))] = g.keys(l);
  return d;
}

struct QueryRequest {
  std::string question;
  PlanStep step;
  const SchemaDescriptor* schema = nullptr;
  const std::vector<StepOutcome>* prior = nullptr;
  std::optional<std::string> last_error;
  int attempt = 1;  // 1-based
};

// Either the next sub-question or the signal that evidence suffices.
struct NextMove {
  bool sufficient = false;
  std::string sub_question;
  std::string summary;
};

class PlannerProvider {
 public:
  virtual ~PlannerProvider() = default;

  virtual std::string name() const = 0;
  virtual std::optional<QueryClass> classify_hint(const std::string& question) = 0;
  virtual std::vector<PlanStep> plan(const std::string& question, const SchemaDescriptor& schema) = 0;
  virtual std::string to_query(const QueryRequest& request) = 0;
  virtual NextMove next_subquestion(const std::string& main_question,
                                    const std::vector<EvidenceItem>& evidence) = 0;
  virtual std::string summarize(const std::string& question, const std::vector<StepOutcome>& results) = 0;
};

}  // namespace wkg::agent
