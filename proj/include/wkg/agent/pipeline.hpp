#pragma once
// Question answering over the knowledge graph: classification, the
// plan-query-reflect chain for operational questions and the iterative
// investigation loop.

#include <optional>
#include <string>
#include <vector>

#include "wkg/agent/evidence.hpp"
#include "wkg/agent/provider.hpp"
#include "wkg/agent/rule_planner.hpp"
#include "wkg/agent/shape.hpp"
#include "wkg/query/evaluator.hpp"

namespace wkg::agent {

inline QueryClass classify_query(const std::string& question, PlannerProvider* provider = nullptr) {
  const std::string norm = normalize_text(question);
  static const char* strong[] = {"why", "bottleneck", "root cause", "reveal"};
  static const char* weak[] = {"slower", "longer than"};
  for (const char* cue : strong)
    if (contains_phrase(norm, cue)) return QueryClass::Investigative;
  // "How many packages took longer than ..." asks for a count, not a cause.
  static const char* counting[] = {" how many ", " how much ", " which ", " what is the number "};
  bool counting_lead = false;
  for (const char* lead : counting) counting_lead = counting_lead || norm.rfind(lead, 0) == 0;
  if (!counting_lead)
    for (const char* cue : weak)
      if (contains_phrase(norm, cue)) return QueryClass::Investigative;
  if (provider)
    if (auto hint = provider->classify_hint(question)) return *hint;
  return QueryClass::Operational;
}

struct ChainOptions {
  int max_retries = 3;
};

inline QAResult run_qa_chain(const std::string& question, const kg::PropertyGraph& graph, PlannerProvider& provider,
                             const ChainOptions& options = {}) {
  if (options.max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be at least 1");
  const SchemaDescriptor schema = describe_schema(graph);
  QAResult out;
  out.question = question;
  const auto steps = provider.plan(question, schema);
  if (steps.empty()) throw Error(ErrorCode::UnmatchedIntent, "empty plan for \"" + question + "\"");

  for (const auto& step : steps) {
    std::optional<std::string> last_error;
    std::string last_query;
    bool done = false;
    for (int attempt = 1; attempt <= options.max_retries && !done; ++attempt) {
      last_query = provider.to_query({question, step, &schema, &out.steps, last_error, attempt});
      try {
        auto table = query::run_query(last_query, graph);
        auto values = shape_values(step.expected_output, table);
        out.steps.push_back({step, last_query, std::move(table), std::move(values), attempt});
        done = true;
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
    if (!done) throw StepExhausted(step.index, last_query, last_error.value_or(""), options.max_retries);
  }

  if (out.steps.size() == 1) {
    out.values = out.steps.front().values;
  } else {
    for (const auto& s : out.steps)
      if (s.values.is_object())
        for (auto it = s.values.begin(); it != s.values.end(); ++it) out.values[it.key()] = *it;
  }
  out.answer = provider.summarize(question, out.steps);
  return out;
}

struct InvestigationOptions {
  int budget = 8;
  int max_retries = 3;
};

inline EvidenceItem evidence_from(const QAResult& r) {
  EvidenceItem e;
  e.sub_question = r.question;
  for (const auto& s : r.steps) {
    e.plan += (e.plan.empty() ? "" : "; ") + s.step.intent;
    e.query_text += (e.query_text.empty() ? "" : "\n\n") + s.query;
    e.attempt_count = std::max(e.attempt_count, s.attempts);
  }
  if (!r.steps.empty()) {
    e.result = r.steps.back().table;
    e.facet = r.steps.front().step.facet;
    e.template_id = r.steps.front().step.template_id;
  }
  e.values = r.values;
  e.summary = r.answer;
  return e;
}

inline InvestigationTrace run_investigation(const std::string& question, const kg::PropertyGraph& graph,
                                            PlannerProvider& provider, const InvestigationOptions& options = {}) {
  if (options.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");
  InvestigationTrace trace;
  trace.main_question = question;
  for (;;) {
    const NextMove move = provider.next_subquestion(question, trace.items);
    if (move.sufficient) {
      trace.final_summary = move.summary;
      trace.terminated_by = "sufficient";
      break;
    }
    if (static_cast<int>(trace.items.size()) >= options.budget) {
      std::string found;
      for (const auto& e : trace.items)
        if (!e.error) found += " " + e.summary;
      trace.final_summary = "Budget of " + std::to_string(options.budget) +
                            " sub-questions exhausted before the evidence was sufficient." + found;
      trace.terminated_by = "budget";
      break;
    }
    EvidenceItem item;
    try {
      item = evidence_from(run_qa_chain(move.sub_question, graph, provider, {options.max_retries}));
    } catch (const StepExhausted& e) {
      item.query_text = e.last_query();
      item.attempt_count = e.attempts();
      item.error = e.what();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnmatchedIntent) throw;
      item.error = e.what();
    }
    item.sub_question = move.sub_question;
    trace.items.push_back(std::move(item));
  }
  trace.budget_used = static_cast<int>(trace.items.size());
  trace.verdict = build_verdict(trace.items);
  return trace;
}

// Markdown table with one row per sub-question: question, plan, query, result.
inline std::string render_trace(const InvestigationTrace& t) {
  auto cell = [](std::string s) {
    for (auto& c : s)
      if (c == '\n') c = ' ';
    std::string out;
    for (char c : s) {
      if (c == '|') out += '\\';
      out += c;
    }
    return out;
  };
  std::string out = "Main question: " + t.main_question + "\n\n";
  out += "| # | Sub-question | Plan | Query | Result |\n|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < t.items.size(); ++i) {
    const auto& e = t.items[i];
    out += "| " + std::to_string(i + 1) + " | " + cell(e.sub_question) + " | " + cell(e.plan) + " | `" +
           cell(e.query_text) + "` | " + cell(e.error ? "error: " + *e.error : e.summary) + " |\n";
  }
  return out + "\n" + t.final_summary + "\n";
}

struct AskResult {
  QueryClass cls = QueryClass::Operational;
  std::optional<QAResult> qa;
  std::optional<InvestigationTrace> investigation;
};

struct AskOptions {
  int max_retries = 3;
  int budget = 8;
};

inline AskResult ask(const std::string& question, const kg::PropertyGraph& graph, PlannerProvider& provider,
                     const AskOptions& options = {}) {
  AskResult r;
  r.cls = classify_query(question, &provider);
  if (r.cls == QueryClass::Operational)
    r.qa = run_qa_chain(question, graph, provider, {options.max_retries});
  else
    r.investigation = run_investigation(question, graph, provider, {options.budget, options.max_retries});
  return r;
}

inline nlohmann::json to_json(const AskResult& r) {
  nlohmann::json j{{"class", class_name(r.cls)}};
  if (r.qa) {
    j["answer"] = r.qa->answer;
    j["values"] = r.qa->values;
    j["trace"] = to_json(*r.qa);
  }
  if (r.investigation) {
    j["answer"] = r.investigation->final_summary;
    j["verdict"] = r.investigation->verdict;
    j["trace"] = to_json(*r.investigation);
  }
  return j;
}

}  // namespace wkg::agent
