#pragma once
// Planner selection by name.
//
//   rule                    built-in template planner
//   remote                  HTTP planner configured from the environment
//   fault:<rate>[:<seed>]   rule planner whose question attempts fail with
//                           probability <rate>
//
// Environment: WKG_PLANNER_ENDPOINT, WKG_PLANNER_TOKEN, WKG_PLANNER_MODEL,
// WKG_PLANNER_TEMPERATURE, WKG_PLANNER_TIMEOUT.

#include <cstdlib>
#include <memory>
#include <string>

#include "wkg/agent/fault_injection.hpp"
#include "wkg/agent/remote_planner.hpp"
#include "wkg/agent/rule_planner.hpp"

namespace wkg::service {

inline agent::RemotePlannerConfig remote_config_from_env() {
  auto env = [](const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
  };
  auto number = [&](const char* name, double fallback) {
    const std::string v = env(name);
    if (v.empty()) return fallback;
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigInvalid, std::string(name) + " is not a number");
    }
  };
  agent::RemotePlannerConfig c;
  c.endpoint = env("WKG_PLANNER_ENDPOINT");
  if (c.endpoint.empty()) throw Error(ErrorCode::ConfigInvalid, "WKG_PLANNER_ENDPOINT is not set");
  c.auth_token = env("WKG_PLANNER_TOKEN");
  if (auto m = env("WKG_PLANNER_MODEL"); !m.empty()) c.model = m;
  c.temperature = number("WKG_PLANNER_TEMPERATURE", c.temperature);
  c.timeout_seconds = number("WKG_PLANNER_TIMEOUT", c.timeout_seconds);
  return c;
}

class ProviderHandle {
 public:
  agent::PlannerProvider& get() { return fault_ ? *fault_ : *base_; }
  agent::PlannerProvider* operator->() { return &get(); }

 private:
  friend ProviderHandle make_provider(const std::string&, const agent::SchemaDescriptor&);
  std::unique_ptr<agent::PlannerProvider> base_;
  std::unique_ptr<agent::FaultInjectingProvider> fault_;
};

inline ProviderHandle make_provider(const std::string& spec, const agent::SchemaDescriptor& schema) {
  ProviderHandle h;
  if (spec == "rule" || spec.empty()) {
    h.base_ = std::make_unique<agent::RulePlanner>(schema);
  } else if (spec == "remote") {
    auto remote = std::make_unique<agent::RemotePlanner>(remote_config_from_env());
    remote->set_schema(schema);
    h.base_ = std::move(remote);
  } else if (spec.rfind("fault:", 0) == 0) {
    agent::FaultPlan plan;
    const std::string rest = spec.substr(6);
    const auto colon = rest.find(':');
    try {
      std::size_t used = 0;
      const std::string rate = rest.substr(0, colon);
      plan.attempt_failure_rate = std::stod(rate, &used);
      if (used != rate.size()) throw std::invalid_argument(rate);
      if (colon != std::string::npos) plan.seed = std::stoull(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad provider '" + spec + "', expected fault:<rate>[:<seed>]");
    }
    h.base_ = std::make_unique<agent::RulePlanner>(schema);
    h.fault_ = std::make_unique<agent::FaultInjectingProvider>(*h.base_, plan);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown provider '" + spec + "' (rule, remote, fault:<rate>)");
  }
  return h;
}

}  // namespace wkg::service
