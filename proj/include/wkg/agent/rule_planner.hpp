#pragma once
// Deterministic planner: keyword signatures select a query template, entities
// are read from the question, and investigations follow fixed playbooks whose
// later steps depend on earlier evidence.

#include <cctype>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "wkg/agent/evidence.hpp"
#include "wkg/agent/provider.hpp"
#include "wkg/agent/templates.hpp"
#include "wkg/time.hpp"

namespace wkg::agent {

// Lower-case words separated by single spaces, padded with a space each side.
inline std::string normalize_text(std::string_view s) {
  std::string out = " ";
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_') {
      out += static_cast<char>(std::tolower(u));
    } else if (out.back() != ' ') {
      out += ' ';
    }
  }
  if (out.back() != ' ') out += ' ';
  return out;
}

inline bool contains_phrase(const std::string& normalized, std::string_view phrase) {
  return normalized.find(normalize_text(phrase)) != std::string::npos;
}

using Entities = std::map<std::string, std::string>;  // slot -> id

namespace detail {

inline std::string resolve_indexed(const SchemaDescriptor& schema, const std::string& label,
                                   const std::string& prefix, const std::string& digits) {
  const long n = std::stol(digits);
  auto it = schema.entities.find(label);
  if (it != schema.entities.end())
    for (const auto& id : it->second)
      if (id.rfind(prefix, 0) == 0 && id.size() > prefix.size() &&
          std::all_of(id.begin() + static_cast<long>(prefix.size()), id.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
          std::stol(id.substr(prefix.size())) == n)
        return id;
  std::string padded = std::to_string(n);
  if (padded.size() < 2) padded.insert(0, "0");
  return prefix + padded;
}

}  // namespace detail

inline Entities extract_entities(const std::string& question, const SchemaDescriptor& schema) {
  Entities out;
  const std::string norm = normalize_text(question);
  std::size_t first = std::string::npos;
  if (auto it = schema.entities.find("SUPPLIER"); it != schema.entities.end())
    for (const auto& id : it->second) {
      auto pos = norm.find(normalize_text(id));
      if (pos != std::string::npos && pos < first) first = pos, out["supplier"] = id;
    }

  std::string lower;
  for (char c : question) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  struct Rule {
    const char* slot;
    const char* label;
    const char* prefix;
    std::regex pattern;
  };
  static const std::vector<Rule> rules = {
      {"agv", "AGV", "AGV_", std::regex(R"(\bagv[ _]?(\d+)\b)")},
      {"forklift", "FL", "FL_", std::regex(R"(\b(?:forklift|fork lift|fl)[ _]?(\d+)\b)")},
      {"worker", "WORKER", "BW_", std::regex(R"(\b(?:worker|bw)[ _]?(\d+)\b)")},
  };
  for (const auto& r : rules) {
    std::smatch m;
    if (std::regex_search(lower, m, r.pattern))
      out[r.slot] = detail::resolve_indexed(schema, r.label, r.prefix, m[1].str());
  }
  return out;
}

struct TemplateMatch {
  const QueryTemplate* tmpl = nullptr;
  Entities entities;
};

// Best-scoring template whose every signature group and slot is satisfied;
// earlier registry entries win ties.
inline std::optional<TemplateMatch> match_template(const std::string& question, const SchemaDescriptor& schema) {
  const std::string norm = normalize_text(question);
  const Entities found = extract_entities(question, schema);
  std::optional<TemplateMatch> best;
  std::size_t best_score = 0;
  for (const auto& t : query_templates()) {
    bool ok = true;
    for (const auto& group : t.signature) {
      bool any = false;
      for (const auto& phrase : group) any = any || contains_phrase(norm, phrase);
      if (!any) {
        ok = false;
        break;
      }
    }
    Entities bound;
    for (const auto& slot : t.slots) {
      auto it = found.find(slot);
      if (it == found.end()) {
        ok = false;
        break;
      }
      bound[slot] = it->second;
    }
    if (!ok) continue;
    const std::size_t score = t.signature.size() + t.slots.size();
    if (!best || score > best_score) {
      best = TemplateMatch{&t, std::move(bound)};
      best_score = score;
    }
  }
  return best;
}

inline std::string cypher_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out;
}

inline std::string literal_of(const nlohmann::json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    std::string s = format_double(v.get<double>());
    if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("ni") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_string()) return "'" + cypher_escape(v.get<std::string>()) + "'";
  throw Error(ErrorCode::InvalidArgument, "cannot splice " + v.dump() + " into a query");
}

// Fills {{slot}} and {{prior.NAME}} placeholders.
inline std::string instantiate(std::string text, const Entities& entities, const std::vector<StepOutcome>* prior,
                               bool escape = true) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = text.find("{{", i);
    if (open == std::string::npos) {
      out += text.substr(i);
      break;
    }
    auto close = text.find("}}", open);
    if (close == std::string::npos) throw Error(ErrorCode::InvalidArgument, "unterminated placeholder");
    out += text.substr(i, open - i);
    const std::string name = text.substr(open + 2, close - open - 2);
    if (name.rfind("prior.", 0) == 0) {
      const std::string key = name.substr(6);
      const nlohmann::json* found = nullptr;
      if (prior)
        for (const auto& p : *prior)
          if (p.values.is_object() && p.values.contains(key)) found = &p.values[key];
      if (!found) throw Error(ErrorCode::InvalidArgument, "no earlier step produced '" + key + "'");
      out += literal_of(*found);
    } else {
      auto it = entities.find(name);
      if (it == entities.end()) throw Error(ErrorCode::InvalidArgument, "no entity for slot '" + name + "'");
      out += escape ? cypher_escape(it->second) : it->second;
    }
    i = close + 2;
  }
  return out;
}

inline Entities parse_entities(const std::vector<std::string>& required) {
  Entities e;
  for (const auto& r : required) {
    auto eq = r.find('=');
    if (eq != std::string::npos) e[r.substr(0, eq)] = r.substr(eq + 1);
  }
  return e;
}

namespace detail {

inline std::string render_scalar(const nlohmann::json& v) {
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline std::string render_values(const nlohmann::json& v) {
  if (!v.is_object()) return render_scalar(v);
  std::string out;
  std::size_t shown = 0;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (shown == 8) {
      out += ", ... (" + std::to_string(v.size() - shown) + " more)";
      break;
    }
    if (!out.empty()) out += ", ";
    if (it->is_object()) {
      std::string inner;
      for (auto jt = it->begin(); jt != it->end(); ++jt)
        inner += (inner.empty() ? "" : ", ") + jt.key() + " " + render_scalar(*jt);
      out += it.key() + " (" + inner + ")";
    } else if (it->is_array()) {
      std::string inner;
      for (const auto& x : *it) inner += (inner.empty() ? "" : ", ") + (x.is_object() ? x.dump() : render_scalar(x));
      out += it.key() + " [" + inner + "]";
    } else {
      out += it.key() + " " + render_scalar(*it);
    }
    ++shown;
  }
  return out;
}

inline std::string seconds(const nlohmann::json& v) {
  return v.is_number() ? fmt(v.get<double>(), 1) + " s" : "n/a";
}

inline std::string ratio_text(double subject, double global) {
  const double r = analytics::deviation_ratio(subject, global);
  return std::isfinite(r) ? fmt(r) + "x" : "unbounded";
}

}  // namespace detail

inline std::string describe_evidence(const std::string& facet, const std::string& template_id,
                                     const nlohmann::json& x) {
  using detail::fmt;
  using detail::num_or;
  using detail::seconds;
  if (!x.is_object() || x.empty()) return "No rows matched.";
  if (facet == "discharge" || facet == "supplier_wait") {
    const double s = num_or(x, "subject_seconds", 0.0), g = num_or(x, "global_average_seconds", 0.0);
    return x.value("subject", std::string("?")) +
           (facet == "discharge" ? " took " : " waited ") + seconds(x["subject_seconds"]) +
           (facet == "discharge" ? " to discharge" : " before discharge began") + " against a global average of " +
           seconds(x["global_average_seconds"]) + " (" + detail::ratio_text(s, g) + ").";
  }
  if (facet == "discharge_ranking") {
    auto high = extreme(x, "total_discharge_seconds", true);
    if (!high) return "No supplier completed a discharge.";
    const auto& row = x[high->first];
    return high->first + " has the longest total discharge time at " + seconds(row["total_discharge_seconds"]) +
           ", " + detail::ratio_text(high->second, num_or(row, "global_average_seconds", 0.0)) +
           " the global average.";
  }
  if (facet == "utilization" && x.contains("agv_subject")) {
    auto u = [](const nlohmann::json& v) { return v.is_number() ? fmt(v.get<double>(), 3) : std::string("n/a"); };
    return x.value("subject", std::string("?")) + " accounts for AGV utilization " + u(x["agv_subject"]) +
           " (global " + u(x["agv_global"]) + ") and forklift utilization " + u(x["fl_subject"]) + " (global " +
           u(x["fl_global"]) + ").";
  }
  if (facet == "utilization") {
    auto low = extreme(x, "utilization", false);
    if (!low) return "No utilization could be computed.";
    const std::string what = template_id == "INV_AGV_UTILIZATION"      ? "AGV"
                             : template_id == "INV_WORKER_UTILIZATION" ? "worker"
                                                                       : "forklift";
    return low->first + " is the least utilized " + what + " at " + fmt(low->second, 3) +
           " against a class average of " + fmt(num_or(x[low->first], "global_utilization", 0.0), 3) + ".";
  }
  if (facet == "forklift_wait") {
    auto high = extreme(x, "average_wait_seconds", true);
    if (!high) return "No forklift handled a package.";
    const double g = num_or(x[high->first], "global_average_wait_seconds", 0.0);
    return "Packages waited longest for " + high->first + ": " + seconds(high->second) + " on average, " +
           detail::ratio_text(high->second, g) + " the global average of " + seconds(g) + ".";
  }
  if (facet == "stage_deviation") {
    EvidenceItem e;
    e.facet = facet;
    e.values = x;
    auto c = stage_comparison(e);
    const auto& top = c->stages[static_cast<std::size_t>(c->verdict)];
    return "For " + c->subject + ", " + std::string(sim::stage_label(c->verdict)) + " deviates most: " +
           seconds(top.subject_mean) + " against a global mean of " + seconds(top.global_mean) + " (" +
           detail::ratio_text(top.subject_mean, top.global_mean) + ").";
  }
  return detail::render_values(x);
}

class RulePlanner : public PlannerProvider {
 public:
  explicit RulePlanner(SchemaDescriptor schema, RulePolicy policy = {})
      : schema_(std::move(schema)), policy_(policy) {}

  std::string name() const override { return "rule"; }

  std::optional<QueryClass> classify_hint(const std::string& question) override {
    auto m = match_template(question, schema_);
    if (m && m->tmpl->facet.empty()) return QueryClass::Operational;
    return std::nullopt;
  }

  std::vector<PlanStep> plan(const std::string& question, const SchemaDescriptor& schema) override {
    auto m = match_template(question, schema);
    if (!m) throw Error(ErrorCode::UnmatchedIntent, "no template matches \"" + question + "\"");
    std::vector<std::string> required;
    for (const auto& [slot, id] : m->entities) required.push_back(slot + "=" + id);
    std::vector<PlanStep> steps;
    for (std::size_t i = 0; i < m->tmpl->steps.size(); ++i) {
      const auto& st = m->tmpl->steps[i];
      steps.push_back({static_cast<int>(i), st.intent, required, st.shape, m->tmpl->id, m->tmpl->facet});
    }
    return steps;
  }

  std::string to_query(const QueryRequest& req) override {
    const auto* t = find_template(req.step.template_id);
    if (!t || req.step.index < 0 || static_cast<std::size_t>(req.step.index) >= t->steps.size())
      throw Error(ErrorCode::UnmatchedIntent, "unknown template step " + req.step.template_id);
    return instantiate(t->steps[static_cast<std::size_t>(req.step.index)].query,
                       parse_entities(req.step.required_entities), req.prior);
  }

  NextMove next_subquestion(const std::string& main_question, const std::vector<EvidenceItem>& evidence) override {
    const auto sufficiency = assess_sufficiency(evidence, policy_);
    if (sufficiency.sufficient) return {true, "", final_summary(evidence, "")};
    const auto steps = playbook(main_question, evidence);
    if (evidence.size() < steps.size()) return {false, steps[evidence.size()], ""};
    std::string gap;
    if (!sufficiency.has_stage_deviation)
      gap = "No stage deviates by " + detail::fmt(policy_.stage_ratio_threshold) + "x or more.";
    if (!sufficiency.has_utilization) gap += (gap.empty() ? "" : " ") + std::string("No utilization comparison succeeded.");
    return {true, "", final_summary(evidence, "The evidence is inconclusive. " + gap)};
  }

  std::string summarize(const std::string& question, const std::vector<StepOutcome>& results) override {
    if (results.empty()) return "No results.";
    const auto& first = results.front().step;
    if (!first.facet.empty()) return describe_evidence(first.facet, first.template_id, results.back().values);
    std::string out;
    for (const auto& r : results) {
      if (!out.empty()) out += " ";
      std::string intent = r.step.intent;
      if (!intent.empty()) intent[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(intent[0])));
      out += intent + ": " + detail::render_values(r.values) + ".";
    }
    (void)question;
    return out;
  }

  const SchemaDescriptor& schema() const { return schema_; }

 private:
  std::string ask(const std::string& template_id, const Entities& e) const {
    return instantiate(find_template(template_id)->question, e, nullptr, false);
  }

  std::string first_id(const std::string& label) const {
    auto it = schema_.entities.find(label);
    return it == schema_.entities.end() || it->second.empty() ? std::string() : it->second.front();
  }

  std::vector<std::string> supplier_steps(const std::string& supplier) const {
    const Entities e{{"supplier", supplier}};
    return {ask("INV_SUPPLIER_DISCHARGE", e), ask("INV_SUPPLIER_WAIT", e), ask("INV_SUPPLIER_UTILIZATION", e),
            ask("INV_SUPPLIER_STAGES", e)};
  }

  std::vector<std::string> playbook(const std::string& main_question,
                                    const std::vector<EvidenceItem>& evidence) const {
    const Entities found = extract_entities(main_question, schema_);
    const std::string norm = normalize_text(main_question);
    if (auto it = found.find("supplier"); it != found.end()) return supplier_steps(it->second);
    if (auto it = found.find("forklift"); it != found.end())
      return {ask("INV_FORKLIFT_STAGES", {{"forklift", it->second}}), ask("INV_FORKLIFT_UTILIZATION", {})};
    if (auto it = found.find("agv"); it != found.end())
      return {ask("INV_AGV_STAGES", {{"agv", it->second}}), ask("INV_AGV_UTILIZATION", {})};
    if (auto it = found.find("worker"); it != found.end())
      return {ask("INV_WORKER_STAGES", {{"worker", it->second}}), ask("INV_WORKER_UTILIZATION", {})};

    if (contains_phrase(norm, "forklift") || contains_phrase(norm, "fork lift") ||
        contains_phrase(norm, "forklifts")) {
      // The suspect is the forklift with the longest wait, else the least used.
      std::string suspect;
      for (const auto& e : evidence) {
        if (!detail::usable(e)) continue;
        if (e.facet == "forklift_wait")
          if (auto h = extreme(e.values, "average_wait_seconds", true)) suspect = h->first;
        if (suspect.empty() && e.template_id == "INV_FORKLIFT_UTILIZATION")
          if (auto l = extreme(e.values, "utilization", false)) suspect = l->first;
      }
      if (suspect.empty()) suspect = first_id("FL");
      return {ask("INV_FORKLIFT_WAIT", {}), ask("INV_FORKLIFT_UTILIZATION", {}),
              ask("INV_FORKLIFT_STAGES", {{"forklift", suspect}})};
    }

    // No subject named: rank suppliers first, then examine the slowest.
    std::string slowest;
    if (!evidence.empty() && detail::usable(evidence.front()))
      if (auto h = extreme(evidence.front().values, "total_discharge_seconds", true)) slowest = h->first;
    if (slowest.empty()) slowest = first_id("SUPPLIER");
    std::vector<std::string> steps{ask("INV_SUPPLIER_RANKING", {})};
    for (auto& s : supplier_steps(slowest)) steps.push_back(std::move(s));
    return steps;
  }

  std::string final_summary(const std::vector<EvidenceItem>& evidence, const std::string& tail) const {
    std::string out;
    for (const auto& e : evidence) {
      if (e.error) continue;
      out += (out.empty() ? "" : " ") + e.summary;
    }
    const auto v = build_verdict(evidence);
    if (v["verdict"].is_string())
      out += (out.empty() ? "" : " ") + std::string("Verdict: ") +
             std::string(sim::stage_label(*sim::parse_stage(v["verdict"].get<std::string>()))) +
             " is the bottleneck for " + v["subject"].get<std::string>() + ".";
    if (!tail.empty()) out += (out.empty() ? "" : " ") + tail;
    return out;
  }

  SchemaDescriptor schema_;
  RulePolicy policy_;
};

}  // namespace wkg::agent
