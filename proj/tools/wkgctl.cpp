// wkgctl: simulate warehouse runs, build knowledge graphs, query and ask
// questions, evaluate planners, and serve the HTTP API.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "wkg/agent/pipeline.hpp"
#include "wkg/kg/graph_io.hpp"
#include "wkg/service/eval.hpp"
#include "wkg/service/http_api.hpp"
#include "wkg/service/providers.hpp"
#include "wkg/service/run_store.hpp"
#include "wkg/sim/log_io.hpp"

namespace {

using namespace wkg;
using nlohmann::json;

struct Common {
  std::string runs_dir;
  std::string run;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::string provider = "rule";
  std::string format = "table";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--runs-dir", c.runs_dir, "Run store directory (default $WKG_RUNS_DIR or ./runs)");
  cmd->add_option("--run", c.run, "Existing run id");
  cmd->add_option("--config", c.config, "Simulation config JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed override");
  cmd->add_option("--scenario", c.scenario,
                  "none | stage-delay:<supplier>:<Stage>:x<m> | degraded-forklift:<FL>[:<f>] | "
                  "supplier-delay:<supplier>[:<m>[:nomisalloc]]");
  cmd->add_option("--provider", c.provider, "rule | remote | fault:<rate>[:<seed>]");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

std::string runs_dir(const Common& c) {
  if (!c.runs_dir.empty()) return c.runs_dir;
  if (const char* env = std::getenv("WKG_RUNS_DIR"); env && *env) return env;
  return "runs";
}

sim::SimConfig load_config(const Common& c) {
  json body = json::object();
  if (!c.config.empty()) {
    auto j = json::parse(kg::read_text_file(c.config), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ConfigInvalid, c.config + " is not valid JSON");
    body["config"] = j;
  }
  if (c.seed) body["seed"] = *c.seed;
  if (!c.scenario.empty()) body["scenario"] = c.scenario;
  return service::config_from_request(body);
}

// The event log and graph a command works on: a stored run when --run is
// given, otherwise a fresh in-memory simulation of the config flags.
struct Workspace {
  sim::EventLog log;
  kg::PropertyGraph graph;
  std::optional<service::RunRecord> run;
};

Workspace open_workspace(const Common& c, bool need_graph = true) {
  Workspace w;
  if (!c.run.empty()) {
    service::RunStore store(runs_dir(c));
    w.run = store.get(c.run);
    w.log = store.load_log(*w.run);
    if (need_graph) w.graph = store.load_graph(*w.run);
    return w;
  }
  const auto config = load_config(c);
  if (auto v = sim::validate_config(config); !v.empty()) throw Error(ErrorCode::ConfigInvalid, sim::describe(v));
  w.log = sim::run_simulation(config);
  if (need_graph) w.graph = kg::build_graph(w.log);
  return w;
}

void print_record(const service::RunRecord& r, const std::string& format) {
  if (format == "json") {
    std::cout << service::to_json(r).dump(2) << "\n";
    return;
  }
  std::cout << "run " << r.run_id << "  status " << service::status_name(r.status) << "  seed " << r.config.seed
            << "  scenario " << sim::scenario_name(r.config.scenario) << "\n";
  if (r.status != service::RunStatus::Created) std::cout << "  packages " << r.packages << "  log " << r.log_path << "\n";
  if (r.status == service::RunStatus::Graphed)
    std::cout << "  nodes " << r.nodes << "  edges " << r.edges << "  graph " << r.graph_path << "\n";
}

std::string read_text_arg(const std::string& text, const std::string& file) {
  if (!file.empty()) return kg::read_text_file(file);
  if (text.empty()) throw CLI::ValidationError("query", "give the query text or --file");
  return text;
}

void print_qa(const agent::QAResult& r, const std::string& format) {
  if (format == "json") {
    std::cout << agent::to_json(r).dump(2) << "\n";
    return;
  }
  std::cout << r.answer << "\n\nvalues: " << r.values.dump() << "\n";
  for (const auto& s : r.steps)
    std::cout << "\nstep " << s.step.index + 1 << " (" << s.attempts << " attempt" << (s.attempts == 1 ? "" : "s")
              << "): " << s.step.intent << "\n"
              << s.query << "\n"
              << query::render_table(s.table, 20);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warehouse knowledge-graph toolkit"};
  app.require_subcommand(1);
  Common c;
  bool force = false;

  auto* simulate = app.add_subcommand("simulate", "Create a run and simulate it, or re-simulate --run");
  add_common(simulate, c);
  simulate->add_flag("--force", force, "Re-simulate a run that already has a log");

  auto* build = app.add_subcommand("build-kg", "Build the knowledge graph of a run (creating one if needed)");
  add_common(build, c);
  build->add_flag("--force", force, "Rebuild an existing graph");

  std::string query_text, query_file;
  std::size_t max_rows = 50;
  auto* query_cmd = app.add_subcommand("query", "Run a graph query");
  add_common(query_cmd, c);
  query_cmd->add_option("text", query_text, "Query text");
  query_cmd->add_option("--file", query_file, "Read the query from a file")->check(CLI::ExistingFile);
  query_cmd->add_option("--max-rows", max_rows, "Rows to print in table format");

  std::string question;
  int retries = 3, budget = 8;
  auto* ask_cmd = app.add_subcommand("ask", "Answer a natural-language question");
  add_common(ask_cmd, c);
  ask_cmd->add_option("question", question, "Question")->required();
  ask_cmd->add_option("--max-retries", retries, "Query attempts per step")->check(CLI::PositiveNumber);
  ask_cmd->add_option("--budget", budget, "Sub-question budget for investigations")->check(CLI::PositiveNumber);

  auto* inv_cmd = app.add_subcommand("investigate", "Run a bottleneck investigation");
  add_common(inv_cmd, c);
  inv_cmd->add_option("question", question, "Main question")->required();
  inv_cmd->add_option("--max-retries", retries, "Query attempts per step")->check(CLI::PositiveNumber);
  inv_cmd->add_option("--budget", budget, "Sub-question budget")->check(CLI::PositiveNumber);

  int n = 2;
  std::vector<int> ks{1, 2};
  auto* eval_cmd = app.add_subcommand("eval", "pass@k of the canonical questions");
  add_common(eval_cmd, c);
  eval_cmd->add_option("-n,--attempts", n, "Attempts per question")->check(CLI::PositiveNumber);
  eval_cmd->add_option("-k", ks, "k values")->delimiter(',');
  eval_cmd->add_option("--max-retries", retries, "Query attempts per step")->check(CLI::PositiveNumber);

  std::string what = "log", as, out;
  auto* export_cmd = app.add_subcommand("export", "Write a run's log or graph");
  add_common(export_cmd, c);
  export_cmd->add_option("what", what, "log | graph")->check(CLI::IsMember({"log", "graph"}));
  export_cmd->add_option("--as", as, "jsonl | csv (log) | cypher (graph)");
  export_cmd->add_option("-o,--out", out, "Output file (default stdout)");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--runs-dir", c.runs_dir, "Run store directory");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed() || build->parsed()) {
      service::RunStore store(runs_dir(c));
      std::string id = c.run;
      if (id.empty()) {
        id = store.create(load_config(c)).run_id;
        store.simulate(id);
      } else if (simulate->parsed()) {
        store.simulate(id, force);
      }
      if (build->parsed()) {
        const auto r = store.get(id);
        if (r.status == service::RunStatus::Created) store.simulate(id);
        if (r.status != service::RunStatus::Graphed || force) store.build_graph(id, force);
      }
      print_record(store.get(id), c.format);
    } else if (query_cmd->parsed()) {
      const auto text = read_text_arg(query_text, query_file);
      const auto w = open_workspace(c);
      const auto table = query::run_query(text, w.graph);
      if (c.format == "json")
        std::cout << query::to_json(table).dump(2) << "\n";
      else
        std::cout << query::render_table(table, max_rows);
    } else if (ask_cmd->parsed()) {
      const auto w = open_workspace(c);
      auto provider = service::make_provider(c.provider, agent::describe_schema(w.graph));
      const auto r = agent::ask(question, w.graph, provider.get(), {retries, budget});
      auto j = agent::to_json(r);
      if (r.investigation && w.run) {
        service::RunStore store(runs_dir(c));
        j["investigation_id"] = store.save_trace(*w.run, j["trace"]);
      }
      if (c.format == "json")
        std::cout << j.dump(2) << "\n";
      else if (r.qa)
        print_qa(*r.qa, c.format);
      else
        std::cout << agent::render_trace(*r.investigation);
    } else if (inv_cmd->parsed()) {
      const auto w = open_workspace(c);
      auto provider = service::make_provider(c.provider, agent::describe_schema(w.graph));
      const auto t = agent::run_investigation(question, w.graph, provider.get(), {budget, retries});
      json j = agent::to_json(t);
      if (w.run) {
        service::RunStore store(runs_dir(c));
        j["investigation_id"] = store.save_trace(*w.run, j);
      }
      if (c.format == "json")
        std::cout << j.dump(2) << "\n";
      else
        std::cout << agent::render_trace(t) << "\nverdict: " << t.verdict.dump() << "\n";
    } else if (eval_cmd->parsed()) {
      for (int k : ks)
        if (k < 1 || k > n) throw CLI::ValidationError("-k", "each k must lie in [1, n]");
      const auto w = open_workspace(c);
      auto provider = service::make_provider(c.provider, agent::describe_schema(w.graph));
      service::EvalOptions opts;
      opts.n = n;
      opts.ks = ks;
      opts.max_retries = retries;
      const auto report = service::evaluate(w.log, w.graph, provider.get(), opts);
      if (c.format == "json")
        std::cout << service::to_json(report).dump(2) << "\n";
      else
        std::cout << service::render_report(report);
    } else if (export_cmd->parsed()) {
      const auto w = open_workspace(c, what == "graph");
      std::string text;
      if (what == "log") {
        if (as.empty() || as == "jsonl")
          text = sim::export_log_jsonl(w.log);
        else if (as == "csv")
          text = sim::export_log_csv(w.log);
        else
          throw CLI::ValidationError("--as", "log exports are jsonl or csv");
      } else {
        text = kg::export_graph(w.graph, kg::parse_graph_format(as.empty() ? "jsonl" : as));
      }
      if (out.empty())
        std::cout << text;
      else
        kg::write_text_file(out, text);
    } else if (serve_cmd->parsed()) {
      service::RunStore store(runs_dir(c));
      service::ApiServer api(store);
      httplib::Server server;
      api.mount(server);
      static httplib::Server* running = &server;
      std::signal(SIGINT, [](int) { running->stop(); });
      std::signal(SIGTERM, [](int) { running->stop(); });
      const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
      if (bound < 0) throw Error(ErrorCode::IoFailure, "cannot bind " + host + ":" + std::to_string(port));
      std::cout << "listening on http://" << host << ":" << bound << "/v1 (runs in " << store.root().string() << ")"
                << std::endl;
      server.listen_after_bind();
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
