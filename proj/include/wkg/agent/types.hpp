#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/error.hpp"
#include "wkg/query/result.hpp"

namespace wkg::agent {

enum class QueryClass { Operational, Investigative };

inline std::string_view class_name(QueryClass c) {
  return c == QueryClass::Operational ? "operational" : "investigative";
}

inline std::optional<QueryClass> parse_query_class(std::string_view s) {
  if (s == "operational") return QueryClass::Operational;
  if (s == "investigative") return QueryClass::Investigative;
  return std::nullopt;
}

struct PlanStep {
  int index = 0;
  std::string intent;
  std::vector<std::string> required_entities;  // "supplier=CamelCargo"
  std::string expected_output;                 // answer-shape spec, see shape.hpp
  std::string template_id;                     // empty for free-form plans
  std::string facet;                           // evidence role in investigations
};

struct StepOutcome {
  PlanStep step;
  std::string query;
  query::ResultTable table;
  nlohmann::json values;
  int attempts = 0;
};

struct EvidenceItem {
  std::string sub_question;
  std::string plan;
  std::string query_text;
  std::optional<query::ResultTable> result;
  nlohmann::json values;
  std::optional<std::string> error;
  std::string summary;
  std::string facet;
  std::string template_id;
  int attempt_count = 0;
};

struct QAResult {
  std::string question;
  std::vector<StepOutcome> steps;
  nlohmann::json values = nlohmann::json::object();
  std::string answer;
};

struct InvestigationTrace {
  std::string main_question;
  std::vector<EvidenceItem> items;
  std::string final_summary;
  nlohmann::json verdict;
  int budget_used = 0;
  std::string terminated_by;  // sufficient, budget
};

// Raised when a plan step fails validation or execution on every attempt.
class StepExhausted : public Error {
 public:
  StepExhausted(int step, std::string last_query, std::string last_error, int attempts)
      : Error(ErrorCode::StepExhausted,
              "step " + std::to_string(step) + " failed after " + std::to_string(attempts) +
                  " attempts: " + last_error),
        step_(step),
        last_query_(std::move(last_query)),
        last_error_(std::move(last_error)),
        attempts_(attempts) {}

  int step() const noexcept { return step_; }
  const std::string& last_query() const noexcept { return last_query_; }
  const std::string& last_error() const noexcept { return last_error_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int step_;
  std::string last_query_;
  std::string last_error_;
  int attempts_;
};

inline nlohmann::json to_json(const PlanStep& s) {
  return {{"index", s.index},
          {"intent", s.intent},
          {"required_entities", s.required_entities},
          {"expected_output", s.expected_output},
          {"template_id", s.template_id},
          {"facet", s.facet}};
}

inline nlohmann::json to_json(const EvidenceItem& e) {
  nlohmann::json j{{"sub_question", e.sub_question},
                   {"plan", e.plan},
                   {"query_text", e.query_text},
                   {"values", e.values},
                   {"summary", e.summary},
                   {"facet", e.facet},
                   {"template_id", e.template_id},
                   {"attempt_count", e.attempt_count}};
  j["result"] = e.result ? query::to_json(*e.result) : nlohmann::json(nullptr);
  j["error"] = e.error ? nlohmann::json(*e.error) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const QAResult& r) {
  auto steps = nlohmann::json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"step", to_json(s.step)},
                     {"query", s.query},
                     {"values", s.values},
                     {"attempts", s.attempts},
                     {"result", query::to_json(s.table)}});
  return {{"question", r.question}, {"answer", r.answer}, {"values", r.values}, {"steps", steps}};
}

inline nlohmann::json to_json(const InvestigationTrace& t) {
  auto items = nlohmann::json::array();
  for (const auto& e : t.items) items.push_back(to_json(e));
  return {{"main_question", t.main_question},
          {"items", items},
          {"final_summary", t.final_summary},
          {"verdict", t.verdict},
          {"budget_used", t.budget_used},
          {"terminated_by", t.terminated_by}};
}

}  // namespace wkg::agent
