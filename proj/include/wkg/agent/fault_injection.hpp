#pragma once
// A provider wrapper that corrupts generated queries on a schedule, used to
// exercise self-reflection and to measure pass@k under failures.

#include <cstdint>
#include <random>
#include <string>

#include "wkg/agent/provider.hpp"

namespace wkg::agent {

struct FaultPlan {
  // The first N attempts of every step return an invalid query.
  int bad_attempts_per_step = 0;
  // Probability that a whole question attempt is corrupted from plan() on.
  double attempt_failure_rate = 0.0;
  std::uint64_t seed = 1;
  // Replace "sufficient" replies with another sub-question.
  bool never_sufficient = false;
};

class FaultInjectingProvider : public PlannerProvider {
 public:
  FaultInjectingProvider(PlannerProvider& inner, FaultPlan plan) : inner_(inner), plan_(plan), rng_(plan.seed) {
    if (plan.attempt_failure_rate < 0.0 || plan.attempt_failure_rate > 1.0)
      throw Error(ErrorCode::InvalidArgument, "attempt_failure_rate must lie in [0, 1]");
  }

  std::string name() const override { return "fault(" + inner_.name() + ")"; }

  std::optional<QueryClass> classify_hint(const std::string& q) override { return inner_.classify_hint(q); }

  std::vector<PlanStep> plan(const std::string& q, const SchemaDescriptor& schema) override {
    corrupted_ = std::bernoulli_distribution(plan_.attempt_failure_rate)(rng_);
    return inner_.plan(q, schema);
  }

  std::string to_query(const QueryRequest& req) override {
    if (corrupted_ || req.attempt <= plan_.bad_attempts_per_step) {
      ++injected_;
      static const char* broken[] = {
          "MATCH (s:SUPPLIER RETURN s",
          "MATCH (x:DOCK) RETURN x",
          "MATCH (s:SUPPLIER) RETURN missing",
          "MATCH (s:SUPPLIER) RETURN s.supplier_id + 1 AS x ORDER BY",
      };
      return broken[static_cast<std::size_t>(req.attempt - 1) % 4];
    }
    return inner_.to_query(req);
  }

  NextMove next_subquestion(const std::string& main, const std::vector<EvidenceItem>& evidence) override {
    NextMove m = inner_.next_subquestion(main, evidence);
    if (plan_.never_sufficient && m.sufficient)
      return {false, "What is the utilization rate of each forklift compared to the global average forklift "
                     "utilization?",
              ""};
    return m;
  }

  std::string summarize(const std::string& q, const std::vector<StepOutcome>& results) override {
    return inner_.summarize(q, results);
  }

  int injected() const { return injected_; }

 private:
  PlannerProvider& inner_;
  FaultPlan plan_;
  std::mt19937_64 rng_;
  bool corrupted_ = false;
  int injected_ = 0;
};

}  // namespace wkg::agent
