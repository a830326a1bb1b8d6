#pragma once
// JSON API under /v1, mounted on an httplib::Server.
//
//   GET  /v1/health
//   GET  /v1/runs                              newest first
//   POST /v1/runs                              {"config": {...}, "seed": n, "scenario": "..."|{...}}
//   GET  /v1/runs/{id}
//   POST /v1/runs/{id}/simulate[?force=true]
//   POST /v1/runs/{id}/graph[?force=true]
//   GET  /v1/runs/{id}/graph[?format=jsonl|cypher]
//   GET  /v1/runs/{id}/log[?format=jsonl|csv]
//   POST /v1/runs/{id}/query                   {"query": "..."}
//   POST /v1/runs/{id}/ask                     {"question": "...", "provider": "rule"}
//   GET  /v1/runs/{id}/investigations/{iid}
//
// Failures return {"error": {"code": "...", "message": "..."}}.

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "wkg/agent/pipeline.hpp"
#include "wkg/query/evaluator.hpp"
#include "wkg/service/providers.hpp"
#include "wkg/service/run_store.hpp"

namespace wkg::service {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::NonPositiveSpeed:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseFailure:
    case ErrorCode::SyntaxError:
    case ErrorCode::TypeError:
    case ErrorCode::UnboundVariable:
    case ErrorCode::UnknownLabelOrType:
    case ErrorCode::UnknownResource:
      return 400;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownQuestion:
    case ErrorCode::UnknownScope:
      return 404;
    case ErrorCode::WrongState:
      return 409;
    case ErrorCode::UnmatchedIntent:
    case ErrorCode::StepExhausted:
      return 422;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::MalformedReply:
      return 502;
    default:
      return 500;
  }
}

inline nlohmann::json error_body(ErrorCode code, const std::string& message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

// Builds the config for a new run from a request body.
inline sim::SimConfig config_from_request(const nlohmann::json& body) {
  if (!body.is_object()) throw Error(ErrorCode::ConfigInvalid, "request body must be a JSON object");
  sim::SimConfig c;
  if (body.contains("config")) sim::from_json(body.at("config"), c);
  try {
    if (body.contains("seed")) c.seed = body.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ConfigInvalid, "seed must be a non-negative integer");
  }
  if (body.contains("scenario")) {
    const auto& s = body.at("scenario");
    sim::ScenarioSpec spec;
    if (s.is_string()) {
      try {
        spec = sim::parse_scenario(s.get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, e.detail());
      }
    } else {
      sim::from_json(s, spec);
    }
    c = sim::apply_scenario(c, spec);
  }
  return c;
}

class ApiServer {
 public:
  explicit ApiServer(RunStore& store) : store_(store) {}

  void mount(httplib::Server& server) {
    server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, {{"status", "ok"}, {"runs_dir", store_.root().string()}});
    });
    server.Get("/v1/runs", wrap([this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json runs = nlohmann::json::array();
      for (const auto& r : store_.list()) runs.push_back(to_json(r));
      reply(res, 200, {{"runs", runs}});
    }));
    server.Post("/v1/runs", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = req.body.empty() ? nlohmann::json::object() : parse_body(req);
      reply(res, 201, to_json(store_.create(config_from_request(body))));
    }));
    server.Get(R"(/v1/runs/([0-9A-Za-z]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
      reply(res, 200, to_json(store_.get(req.matches[1])));
    }));
    server.Post(R"(/v1/runs/([0-9A-Za-z]+)/simulate)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, 200, to_json(store_.simulate(req.matches[1], flag(req, "force"))));
                }));
    server.Post(R"(/v1/runs/([0-9A-Za-z]+)/graph)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      reply(res, 200, to_json(store_.build_graph(req.matches[1], flag(req, "force"))));
    }));
    server.Get(R"(/v1/runs/([0-9A-Za-z]+)/graph)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto run = store_.get(req.matches[1]);
      const auto format = kg::parse_graph_format(req.has_param("format") ? req.get_param_value("format") : "jsonl");
      if (format == kg::GraphFormat::Jsonl) {
        store_.load_graph(run);  // state check
        res.set_content(kg::read_text_file(run.graph_path), "application/x-ndjson");
      } else {
        res.set_content(kg::export_graph(store_.load_graph(run), format), "text/plain");
      }
    }));
    server.Get(R"(/v1/runs/([0-9A-Za-z]+)/log)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto run = store_.get(req.matches[1]);
      const std::string format = req.has_param("format") ? req.get_param_value("format") : "jsonl";
      if (format == "jsonl") {
        store_.load_log(run);
        res.set_content(kg::read_text_file(run.log_path), "application/x-ndjson");
      } else if (format == "csv") {
        res.set_content(sim::export_log_csv(store_.load_log(run)), "text/csv");
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown log format '" + format + "'");
      }
    }));
    server.Post(R"(/v1/runs/([0-9A-Za-z]+)/query)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto text = string_field(body, "query");
      const auto graph = store_.load_graph(store_.get(req.matches[1]));
      reply(res, 200, query::to_json(query::run_query(text, graph)));
    }));
    server.Post(R"(/v1/runs/([0-9A-Za-z]+)/ask)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto question = string_field(body, "question");
      const auto run = store_.get(req.matches[1]);
      const auto graph = store_.load_graph(run);
      auto provider = make_provider(body.value("provider", std::string("rule")), agent::describe_schema(graph));
      agent::AskOptions opts;
      opts.budget = body.value("budget", opts.budget);
      opts.max_retries = body.value("max_retries", opts.max_retries);
      const auto result = agent::ask(question, graph, provider.get(), opts);
      auto j = agent::to_json(result);
      if (result.investigation) j["investigation_id"] = store_.save_trace(run, j["trace"]);
      reply(res, 200, j);
    }));
    server.Get(R"(/v1/runs/([0-9A-Za-z]+)/investigations/([0-9A-Za-z]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 reply(res, 200, store_.load_trace(store_.get(req.matches[1]), req.matches[2]));
               }));
  }

 private:
  template <typename F>
  static httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        reply(res, http_status(e.code()), error_body(e.code(), e.detail()));
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}});
      }
    };
  }

  static void reply(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static nlohmann::json parse_body(const httplib::Request& req) {
    auto j = nlohmann::json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  }

  static std::string string_field(const nlohmann::json& body, const char* name) {
    if (!body.contains(name) || !body[name].is_string() || body[name].get<std::string>().empty())
      throw Error(ErrorCode::InvalidArgument, std::string("missing string field \"") + name + "\"");
    return body[name].get<std::string>();
  }

  static bool flag(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return false;
    const auto v = req.get_param_value(name);
    return v.empty() || v == "true" || v == "1";
  }

  RunStore& store_;
};

}  // namespace wkg::service
