#pragma once
// Reading investigation evidence back into findings: stage deviations,
// utilization comparisons, the sufficiency test and the final verdict.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/agent/types.hpp"
#include "wkg/analytics/oracle.hpp"
#include "wkg/sim/stage.hpp"

namespace wkg::agent {

struct StageFinding {
  sim::StageId stage = sim::StageId::WaitToWorker;
  double subject_mean = 0.0;
  double global_mean = 0.0;
  double ratio = 1.0;
};

struct StageComparison {
  std::string subject;
  std::vector<StageFinding> stages;
  sim::StageId verdict = sim::StageId::WaitToWorker;
  double verdict_ratio = 0.0;
};

namespace detail {

inline double num_or(const nlohmann::json& o, const std::string& key, double fallback) {
  auto it = o.find(key);
  return it != o.end() && it->is_number() ? it->get<double>() : fallback;
}

inline bool usable(const EvidenceItem& e) { return !e.error && e.values.is_object() && !e.values.empty(); }

inline std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

inline std::optional<StageComparison> stage_comparison(const EvidenceItem& e) {
  if (e.facet != "stage_deviation" || !detail::usable(e)) return std::nullopt;
  const auto& v = e.values;
  StageComparison c;
  c.subject = v.value("subject", std::string());
  double best = -1.0;
  for (auto s : sim::kAllStages) {
    const std::string k(sim::stage_key(s));
    StageFinding f;
    f.stage = s;
    f.subject_mean = detail::num_or(v, k + "_subject", 0.0);
    f.global_mean = detail::num_or(v, k + "_global", 0.0);
    f.ratio = analytics::deviation_ratio(f.subject_mean, f.global_mean);
    if (f.ratio > best) best = f.ratio, c.verdict = s;
    c.stages.push_back(f);
  }
  c.verdict_ratio = best;
  return c;
}

struct RulePolicy {
  double stage_ratio_threshold = 1.2;
};

struct Sufficiency {
  bool sufficient = false;
  bool has_stage_deviation = false;
  bool has_utilization = false;
};

// Sufficient once some stage deviates by at least the threshold and some
// utilization comparison is on record.
inline Sufficiency assess_sufficiency(const std::vector<EvidenceItem>& evidence,
                                      const RulePolicy& policy = {}) {
  Sufficiency s;
  for (const auto& e : evidence) {
    if (auto c = stage_comparison(e); c && c->verdict_ratio >= policy.stage_ratio_threshold)
      s.has_stage_deviation = true;
    if (e.facet == "utilization" && detail::usable(e)) s.has_utilization = true;
  }
  s.sufficient = s.has_stage_deviation && s.has_utilization;
  return s;
}

// Resource with the extreme value of `field` in a per-resource map; ties go to
// the smaller id.
inline std::optional<std::pair<std::string, double>> extreme(const nlohmann::json& map, const std::string& field,
                                                             bool largest) {
  std::optional<std::pair<std::string, double>> best;
  for (auto it = map.begin(); it != map.end(); ++it) {
    if (!it->is_object()) continue;
    auto f = it->find(field);
    if (f == it->end() || !f->is_number()) continue;
    const double x = f->get<double>();
    if (!best || (largest ? x > best->second : x < best->second)) best = std::make_pair(it.key(), x);
  }
  return best;
}

inline std::string subject_kind_of(const std::string& template_id) {
  if (template_id == "INV_FORKLIFT_STAGES") return "FL";
  if (template_id == "INV_AGV_STAGES") return "AGV";
  if (template_id == "INV_WORKER_STAGES") return "WORKER";
  return "SUPPLIER";
}

inline nlohmann::json build_verdict(const std::vector<EvidenceItem>& evidence) {
  using nlohmann::json;
  json v{{"subject", nullptr}, {"subject_kind", nullptr}, {"stages", json::array()},
         {"verdict", nullptr}, {"verdict_ratio", nullptr}, {"utilization", json::array()},
         {"findings", json::object()}};
  std::string subject;
  for (const auto& e : evidence) {
    if (auto c = stage_comparison(e)) {
      subject = c->subject;
      v["subject"] = c->subject;
      v["subject_kind"] = subject_kind_of(e.template_id);
      v["stages"] = json::array();
      for (const auto& f : c->stages)
        v["stages"].push_back({{"stage", sim::stage_name(f.stage)},
                               {"subject_mean", f.subject_mean},
                               {"global_mean", f.global_mean},
                               {"ratio", std::isfinite(f.ratio) ? json(f.ratio) : json("inf")}});
      v["verdict"] = sim::stage_name(c->verdict);
      v["verdict_ratio"] = std::isfinite(c->verdict_ratio) ? json(c->verdict_ratio) : json("inf");
    }
  }
  auto& findings = v["findings"];
  for (const auto& e : evidence) {
    if (!detail::usable(e)) continue;
    const auto& x = e.values;
    if (e.facet == "utilization" && x.contains("agv_subject")) {
      v["utilization"].push_back({{"class", "AGV"}, {"subject", x["agv_subject"]}, {"global", x["agv_global"]}});
      v["utilization"].push_back({{"class", "FL"}, {"subject", x["fl_subject"]}, {"global", x["fl_global"]}});
    } else if (e.facet == "utilization") {
      const std::string cls = e.template_id == "INV_AGV_UTILIZATION"      ? "AGV"
                              : e.template_id == "INV_WORKER_UTILIZATION" ? "WORKER"
                                                                          : "FL";
      if (auto low = extreme(x, "utilization", false)) {
        findings["min_utilization_" + std::string(cls == "FL" ? "forklift" : cls == "AGV" ? "agv" : "worker")] =
            low->first;
        const auto& any = x[low->first];
        const json subj = !subject.empty() && x.contains(subject) ? x[subject]["utilization"] : json(nullptr);
        v["utilization"].push_back({{"class", cls}, {"subject", subj}, {"global", any["global_utilization"]}});
      }
    } else if (e.facet == "forklift_wait") {
      if (auto high = extreme(x, "average_wait_seconds", true)) findings["max_wait_forklift"] = high->first;
    } else if (e.facet == "discharge") {
      findings["discharge_ratio"] =
          analytics::deviation_ratio(detail::num_or(x, "subject_seconds", 0.0),
                                     detail::num_or(x, "global_average_seconds", 0.0));
    } else if (e.facet == "discharge_ranking") {
      if (auto high = extreme(x, "total_discharge_seconds", true)) findings["slowest_supplier"] = high->first;
    }
  }
  return v;
}

}  // namespace wkg::agent
