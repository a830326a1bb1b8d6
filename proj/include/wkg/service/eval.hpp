#pragma once
// pass@k over the canonical question set.
//
// Each question is asked n times through the full chain; an attempt is correct
// when its structured values match the oracle answer. pass@k uses the unbiased
// estimator 1 - C(n-c, k) / C(n, k), evaluated as a running product so large n
// never overflows.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/agent/pipeline.hpp"
#include "wkg/analytics/canonical.hpp"

namespace wkg::service {

inline double pass_at_k(int n, int c, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (n < k) throw Error(ErrorCode::InvalidArgument, "pass@" + std::to_string(k) + " needs n >= k, got n = " +
                                                         std::to_string(n));
  if (c < 0 || c > n) throw Error(ErrorCode::InvalidArgument, "correct count must lie in [0, n]");
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (int i = n - c + 1; i <= n; ++i) miss *= 1.0 - static_cast<double>(k) / i;
  return 1.0 - miss;
}

struct QuestionScore {
  std::string question_id;
  std::string category;
  int n = 0;
  int c = 0;
  std::map<int, double> pass;  // k -> pass@k
  std::vector<std::string> failures;
};

struct EvalReport {
  std::string provider;
  std::vector<int> ks;
  std::vector<QuestionScore> questions;
  std::map<std::string, std::map<int, double>> categories;
  std::map<int, double> overall;
};

struct EvalOptions {
  int n = 2;
  std::vector<int> ks{1, 2};
  double tolerance = 1e-6;
  int max_retries = 3;
};

// Recomputes category and overall means from the per-question rows.
inline void finish(EvalReport& r) {
  r.categories.clear();
  r.overall.clear();
  std::map<std::string, int> members;
  for (const auto& q : r.questions) {
    ++members[q.category];
    for (const auto& [k, v] : q.pass) {
      r.categories[q.category][k] += v;
      r.overall[k] += v;
    }
  }
  for (auto& [cat, m] : r.categories)
    for (auto& [k, v] : m) v /= members[cat];
  for (auto& [k, v] : r.overall) v /= static_cast<double>(r.questions.size());
}

// Adds the rows of `more` to `into`, summing n and c per question id.
inline void merge(EvalReport& into, const EvalReport& more) {
  for (const auto& q : more.questions) {
    auto it = std::find_if(into.questions.begin(), into.questions.end(),
                           [&](const QuestionScore& s) { return s.question_id == q.question_id; });
    if (it == into.questions.end()) {
      into.questions.push_back(q);
      continue;
    }
    it->n += q.n;
    it->c += q.c;
    it->failures.insert(it->failures.end(), q.failures.begin(), q.failures.end());
    for (int k : into.ks) it->pass[k] = pass_at_k(it->n, it->c, k);
  }
  finish(into);
}

inline EvalReport evaluate(const sim::EventLog& log, const kg::PropertyGraph& graph,
                           agent::PlannerProvider& provider, const EvalOptions& options = {}) {
  if (options.ks.empty()) throw Error(ErrorCode::InvalidArgument, "at least one k is required");
  for (int k : options.ks) pass_at_k(options.n, 0, k);

  EvalReport report;
  report.provider = provider.name();
  report.ks = options.ks;
  for (const auto& q : analytics::canonical_questions()) {
    const auto expected = analytics::answer_canonical(q.id, log);
    QuestionScore s{q.id, q.category, options.n, 0, {}, {}};
    for (int attempt = 0; attempt < options.n; ++attempt) {
      try {
        const auto r = agent::run_qa_chain(q.text, graph, provider, {options.max_retries});
        if (agent::values_match(r.values, expected, options.tolerance))
          ++s.c;
        else
          s.failures.push_back("wrong values: " + r.values.dump());
      } catch (const Error& e) {
        s.failures.push_back(e.what());
      }
    }
    for (int k : options.ks) s.pass[k] = pass_at_k(s.n, s.c, k);
    report.questions.push_back(std::move(s));
  }
  finish(report);
  return report;
}

inline nlohmann::json pass_json(const std::map<int, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j["pass@" + std::to_string(k)] = v;
  return j;
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json questions = nlohmann::json::array();
  for (const auto& q : r.questions) {
    nlohmann::json j{{"question_id", q.question_id}, {"category", q.category}, {"n", q.n}, {"c", q.c}};
    j.update(pass_json(q.pass));
    if (!q.failures.empty()) j["failures"] = q.failures;
    questions.push_back(std::move(j));
  }
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [c, m] : r.categories) cats[c] = pass_json(m);
  return {{"provider", r.provider}, {"ks", r.ks}, {"questions", questions}, {"categories", cats},
          {"overall", pass_json(r.overall)}};
}

inline std::string render_report(const EvalReport& r) {
  std::string out = "question  category   n   c";
  for (int k : r.ks) out += "   pass@" + std::to_string(k);
  out += "\n";
  auto cell = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%9.4f", v);
    return std::string(buf);
  };
  for (const auto& q : r.questions) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-9s %-9s %3d %3d", q.question_id.c_str(), q.category.c_str(), q.n, q.c);
    out += buf;
    for (int k : r.ks) out += cell(q.pass.at(k));
    out += "\n";
  }
  for (const auto& [cat, m] : r.categories) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-9s %-9s        ", "mean", cat.c_str());
    out += buf;
    for (int k : r.ks) out += cell(m.at(k));
    out += "\n";
  }
  out += "overall                      ";
  for (int k : r.ks) out += cell(r.overall.at(k));
  return out + "\n";
}

}  // namespace wkg::service
