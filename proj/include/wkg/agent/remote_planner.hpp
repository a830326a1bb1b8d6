#pragma once
// Planner backed by a chat-completion style HTTP endpoint.
//
// Request (POST to the endpoint path):
//   {"model": "...", "temperature": 0.1, "prompt_version": "wkg-prompts/1",
//    "messages": [{"role": "system", "content": "..."}, {"role": "user", "content": "..."}]}
// Response: {"choices": [{"message": {"content": "<JSON object as text>"}}]}
//
// Only the first choice is read. Its content must hold one JSON object, bare
// or inside a ``` fence.

#include <chrono>
#include <memory>
#include <regex>
#include <semaphore>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "wkg/agent/prompts.hpp"
#include "wkg/agent/provider.hpp"
#include "wkg/agent/shape.hpp"

namespace wkg::agent {

struct RemotePlannerConfig {
  std::string endpoint;  // http://host:port/path
  std::string auth_token;
  std::string model = "default";
  double temperature = 0.0;
  double timeout_seconds = 30.0;
  int evidence_rows = 20;
};

namespace detail {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

inline ParsedUrl parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(http)://([A-Za-z0-9.\-]+|\[[0-9a-fA-F:]+\])(:\d+)?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re))
    throw Error(ErrorCode::ConfigInvalid, "endpoint must be an http:// URL, got '" + url + "'");
  return {m[1].str() + "://" + m[2].str() + m[3].str(), m[4].matched ? m[4].str() : "/"};
}

inline std::string fill(std::string text, const std::map<std::string, std::string>& vars) {
  for (const auto& [k, v] : vars) {
    const std::string key = "{{" + k + "}}";
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + v.size()))
      text.replace(pos, key.size(), v);
  }
  return text;
}

// First JSON object in a reply, tolerating code fences and surrounding prose.
inline nlohmann::json extract_object(const std::string& content) {
  auto open = content.find('{');
  auto close = content.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw Error(ErrorCode::MalformedReply, "reply holds no JSON object");
  auto j = nlohmann::json::parse(content.substr(open, close - open + 1), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedReply, "reply is not a JSON object");
  return j;
}

inline std::string table_excerpt(const query::ResultTable& t, int rows) {
  return query::render_table(t, static_cast<std::size_t>(rows));
}

}  // namespace detail

class RemotePlanner : public PlannerProvider {
 public:
  explicit RemotePlanner(RemotePlannerConfig config, int max_in_flight = 4)
      : config_(std::move(config)), url_(detail::parse_endpoint(config_.endpoint)), slots_(max_in_flight) {
    if (!(config_.temperature >= 0.0 && config_.temperature <= 0.3))
      throw Error(ErrorCode::ConfigInvalid, "temperature must lie in [0.0, 0.3]");
    if (!(config_.timeout_seconds > 0.0)) throw Error(ErrorCode::ConfigInvalid, "timeout must be positive");
    if (max_in_flight < 1) throw Error(ErrorCode::ConfigInvalid, "max_in_flight must be at least 1");
  }

  std::string name() const override { return "remote"; }
  const RemotePlannerConfig& config() const { return config_; }

  std::optional<QueryClass> classify_hint(const std::string& question) override {
    auto j = exchange(detail::fill(prompts::kClassify, {{"question", question}}), [](const nlohmann::json& r) {
      if (!r.contains("class") || !r["class"].is_string() || !parse_query_class(r["class"].get<std::string>()))
        throw Error(ErrorCode::MalformedReply, "expected \"class\": \"operational\" or \"investigative\"");
    });
    return parse_query_class(j["class"].get<std::string>());
  }

  std::vector<PlanStep> plan(const std::string& question, const SchemaDescriptor& schema) override {
    auto j = exchange(detail::fill(prompts::kPlan, {{"schema", schema_text(schema)},
                                                     {"shapes", prompts::kShapes},
                                                     {"question", question}}),
                      [](const nlohmann::json& r) {
                        if (!r.contains("steps") || !r["steps"].is_array() || r["steps"].empty())
                          throw Error(ErrorCode::MalformedReply, "expected a non-empty \"steps\" array");
                        for (const auto& s : r["steps"]) {
                          if (!s.is_object() || !s.contains("intent") || !s["intent"].is_string() ||
                              !s.contains("expected_output") || !s["expected_output"].is_string())
                            throw Error(ErrorCode::MalformedReply, "each step needs intent and expected_output");
                          parse_shape_or_malformed(s["expected_output"].get<std::string>());
                        }
                      });
    std::vector<PlanStep> steps;
    for (const auto& s : j["steps"]) {
      PlanStep p;
      p.index = static_cast<int>(steps.size());
      p.intent = s["intent"].get<std::string>();
      p.expected_output = s["expected_output"].get<std::string>();
      if (s.contains("required_entities") && s["required_entities"].is_array())
        for (const auto& e : s["required_entities"])
          if (e.is_string()) p.required_entities.push_back(e.get<std::string>());
      steps.push_back(std::move(p));
    }
    return steps;
  }

  std::string to_query(const QueryRequest& req) override {
    std::string prior;
    if (req.prior)
      for (const auto& o : *req.prior)
        prior += "- " + o.step.intent + ": " + o.values.dump() + "\n";
    if (prior.empty()) prior = "(none)\n";
    std::string entities;
    for (const auto& e : req.step.required_entities) entities += (entities.empty() ? "" : ", ") + e;
    const std::string last =
        req.last_error ? detail::fill(prompts::kLastError, {{"error", *req.last_error}}) : std::string();
    auto j = exchange(detail::fill(prompts::kQuery, {{"schema", req.schema ? schema_text(*req.schema) : ""},
                                                      {"dialect", prompts::kDialect},
                                                      {"question", req.question},
                                                      {"step_index", std::to_string(req.step.index + 1)},
                                                      {"intent", req.step.intent},
                                                      {"entities", entities.empty() ? "(none)" : entities},
                                                      {"expected_output", req.step.expected_output},
                                                      {"prior", prior},
                                                      {"last_error", last}}),
                      [](const nlohmann::json& r) {
                        if (!r.contains("query") || !r["query"].is_string() || r["query"].get<std::string>().empty())
                          throw Error(ErrorCode::MalformedReply, "expected a non-empty \"query\" string");
                      });
    return j["query"].get<std::string>();
  }

  NextMove next_subquestion(const std::string& main, const std::vector<EvidenceItem>& evidence) override {
    std::string ev;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
      const auto& e = evidence[i];
      ev += std::to_string(i + 1) + ". " + e.sub_question + "\n";
      if (e.error) {
        ev += "   failed: " + *e.error + "\n";
        continue;
      }
      if (!e.values.empty()) ev += "   values: " + e.values.dump() + "\n";
      if (e.result) ev += detail::table_excerpt(*e.result, config_.evidence_rows);
    }
    if (ev.empty()) ev = "(none yet)\n";
    auto j = exchange(detail::fill(prompts::kNext, {{"schema", schema_.text}, {"question", main}, {"evidence", ev}}),
                      [](const nlohmann::json& r) {
                        if (!r.contains("sufficient") || !r["sufficient"].is_boolean())
                          throw Error(ErrorCode::MalformedReply, "expected boolean \"sufficient\"");
                        const char* need = r["sufficient"].get<bool>() ? "summary" : "sub_question";
                        if (!r.contains(need) || !r[need].is_string())
                          throw Error(ErrorCode::MalformedReply, std::string("expected string \"") + need + "\"");
                      });
    if (j["sufficient"].get<bool>()) return {true, "", j["summary"].get<std::string>()};
    return {false, j["sub_question"].get<std::string>(), ""};
  }

  std::string summarize(const std::string& question, const std::vector<StepOutcome>& results) override {
    std::string rs;
    for (const auto& r : results)
      rs += "- " + r.step.intent + ": " + r.values.dump() + "\n" +
            detail::table_excerpt(r.table, config_.evidence_rows);
    auto j = exchange(detail::fill(prompts::kSummarize, {{"question", question}, {"results", rs}}),
                      [](const nlohmann::json& r) {
                        if (!r.contains("summary") || !r["summary"].is_string())
                          throw Error(ErrorCode::MalformedReply, "expected string \"summary\"");
                      });
    return j["summary"].get<std::string>();
  }

  // The schema text used for sub-question prompts, which carry no schema argument.
  void set_schema(SchemaDescriptor schema) { schema_ = std::move(schema); }

 private:
  static std::string schema_text(const SchemaDescriptor& s) { return s.text; }

  static void parse_shape_or_malformed(const std::string& spec) {
    try {
      parse_shape(spec);
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedReply, e.detail());
    }
  }

  // One call plus at most one reformat retry.
  template <typename Check>
  nlohmann::json exchange(const std::string& user, Check check) {
    nlohmann::json messages = nlohmann::json::array(
        {{{"role", "system"}, {"content", prompts::kSystem}}, {{"role", "user"}, {"content", user}}});
    for (int round = 0;; ++round) {
      const std::string content = post(messages);
      try {
        auto j = detail::extract_object(content);
        check(j);
        return j;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MalformedReply || round == 1) throw;
        messages.push_back({{"role", "assistant"}, {"content", content}});
        messages.push_back({{"role", "user"}, {"content", detail::fill(prompts::kReformat, {{"error", e.detail()}})}});
      }
    }
  }

  std::string post(const nlohmann::json& messages) {
    const nlohmann::json body{{"model", config_.model},
                              {"temperature", config_.temperature},
                              {"prompt_version", prompts::kPromptVersion},
                              {"messages", messages}};
    slots_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{slots_};

    httplib::Client client(url_.origin);
    const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    httplib::Headers headers;
    if (!config_.auth_token.empty()) headers.emplace("Authorization", "Bearer " + config_.auth_token);
    auto res = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!res)
      throw Error(ErrorCode::ProviderUnavailable,
                  config_.endpoint + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
      throw Error(ErrorCode::ProviderUnavailable, config_.endpoint + ": HTTP " + std::to_string(res->status));
    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty() ||
        !j["choices"][0].contains("message") || !j["choices"][0]["message"].contains("content") ||
        !j["choices"][0]["message"]["content"].is_string())
      throw Error(ErrorCode::MalformedReply, "response lacks choices[0].message.content");
    return j["choices"][0]["message"]["content"].get<std::string>();
  }

  RemotePlannerConfig config_;
  detail::ParsedUrl url_;
  SchemaDescriptor schema_;
  std::counting_semaphore<> slots_;
};

}  // namespace wkg::agent
