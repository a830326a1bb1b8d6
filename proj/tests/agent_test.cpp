#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "wkg/agent/fault_injection.hpp"
#include "wkg/agent/pipeline.hpp"
#include "wkg/agent/remote_planner.hpp"
#include "wkg/analytics/canonical.hpp"
#include "wkg/kg/build.hpp"
#include "wkg/query/parser.hpp"
#include "wkg/sim/simulation.hpp"

using namespace wkg;
using namespace wkg::agent;
using nlohmann::json;

namespace {

sim::SimConfig seeded(std::uint64_t seed) {
  sim::SimConfig c;
  c.seed = seed;
  return c;
}

struct World {
  sim::EventLog log;
  kg::PropertyGraph graph;
  explicit World(const sim::SimConfig& c) : log(sim::run_simulation(c)), graph(kg::build_graph(log)) {}
};

const World& default_world() {
  static const World w(seeded(7));
  return w;
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const sim::StageTransferDelay kScenarioOne{"CamelCargo", sim::StageId::WaitToWorker, std::nullopt, 2.5};
const sim::DegradedForklift kScenarioTwo{"FL_00", 1.8};

}  // namespace

// ---- registry ---------------------------------------------------------------

TEST(Templates, RegistryCoversCanonicalQuestionsAndPlaybooks) {
  std::set<std::string> ids;
  for (const auto& t : query_templates()) ids.insert(t.id);
  EXPECT_GE(query_templates().size(), 28u);
  EXPECT_EQ(ids.size(), query_templates().size());
  for (const auto& q : analytics::canonical_questions()) EXPECT_TRUE(ids.count(q.id)) << q.id;
  for (const char* id : {"INV_SUPPLIER_STAGES", "INV_SUPPLIER_UTILIZATION", "INV_PACKAGE_STAGES",
                         "INV_FORKLIFT_WAIT", "INV_FORKLIFT_UTILIZATION"})
    EXPECT_TRUE(ids.count(id)) << id;
}

TEST(Templates, EveryStepParsesOnceInstantiated) {
  const Entities e{{"supplier", "O'Brien Goods"}, {"agv", "AGV_04"}, {"forklift", "FL_00"}, {"worker", "BW_01"}};
  std::vector<StepOutcome> prior(1);
  prior[0].values = {{"average_discharge_seconds", 1234.5}};
  std::size_t steps = 0;
  for (const auto& t : query_templates())
    for (const auto& s : t.steps) {
      const std::string text = instantiate(s.query, e, &prior);
      EXPECT_NO_THROW(query::parse_query(text)) << t.id << "\n" << text;
      EXPECT_NO_THROW(parse_shape(s.shape)) << t.id;
      ++steps;
    }
  EXPECT_GT(steps, query_templates().size());
}

TEST(Templates, ReferencePhrasingSelectsOwnTemplate) {
  const auto schema = describe_schema(default_world().graph);
  for (const auto& t : query_templates()) {
    std::string q = t.question;
    q = instantiate(q, {{"supplier", "CamelCargo"}, {"agv", "AGV_04"}, {"forklift", "FL_00"}, {"worker", "BW_01"}},
                    nullptr, false);
    auto m = match_template(q, schema);
    ASSERT_TRUE(m) << q;
    EXPECT_EQ(m->tmpl->id, t.id) << q;
  }
}

TEST(Templates, CanonicalPhrasingSelectsCanonicalTemplate) {
  const auto schema = describe_schema(default_world().graph);
  for (const auto& q : analytics::canonical_questions()) {
    auto m = match_template(q.text, schema);
    ASSERT_TRUE(m) << q.text;
    EXPECT_EQ(m->tmpl->id, q.id);
  }
  auto a1 = match_template(analytics::canonical_question("A1").text, schema);
  const auto& text = a1->tmpl->steps[0].query;
  EXPECT_NE(text.find("ORDER BY packages ASC"), std::string::npos);
  EXPECT_NE(text.find("LIMIT 3"), std::string::npos);
}

TEST(Templates, EntityExtraction) {
  const auto schema = describe_schema(default_world().graph);
  auto e = extract_entities("How many packages did agv 4 hand to Forklift_3 for supplier deltadrops?", schema);
  EXPECT_EQ(e["agv"], "AGV_04");
  EXPECT_EQ(e["forklift"], "FL_03");
  EXPECT_EQ(e["supplier"], "DeltaDrops");
  auto w = extract_entities("What did worker BW_11 do?", schema);
  EXPECT_EQ(w["worker"], "BW_11");
  EXPECT_TRUE(extract_entities("Nothing to see here", schema).empty());
}

TEST(Templates, UnmatchedIntent) {
  RulePlanner p(describe_schema(default_world().graph));
  EXPECT_EQ(code_of([&] { p.plan("what is the meaning of life", p.schema()); }), ErrorCode::UnmatchedIntent);
  EXPECT_EQ(code_of([&] { run_qa_chain("what is the meaning of life", default_world().graph, p); }),
            ErrorCode::UnmatchedIntent);
}

TEST(Templates, PriorValuesSpliceAsExactLiterals) {
  std::vector<StepOutcome> prior(1);
  prior[0].values = {{"x", 0.1 + 0.2}, {"n", 3}, {"s", "it's"}, {"z", nullptr}, {"w", 2.0}};
  EXPECT_EQ(instantiate("{{prior.x}}", {}, &prior), "0.30000000000000004");
  EXPECT_EQ(instantiate("{{prior.n}} {{prior.s}} {{prior.z}} {{prior.w}}", {}, &prior), "3 'it\\'s' null 2.0");
  EXPECT_EQ(code_of([&] { instantiate("{{prior.q}}", {}, &prior); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { instantiate("{{agv}}", {}, &prior); }), ErrorCode::InvalidArgument);
}

// ---- answer shapes ----------------------------------------------------------

TEST(Shapes, RecordMapRows) {
  query::ResultTable t{{"k", "a", "b"}, {{"x", 1, 2.5}, {"y", 2, nullptr}}};
  EXPECT_EQ(shape_values("map:k:a", t), (json{{"x", 1}, {"y", 2}}));
  EXPECT_EQ(shape_values("map:k:a,b", t), (json{{"x", {{"a", 1}, {"b", 2.5}}}, {"y", {{"a", 2}, {"b", nullptr}}}}));
  EXPECT_EQ(shape_values("rows:items:k", t), (json{{"items", {{{"k", "x"}}, {{"k", "y"}}}}}));
  EXPECT_EQ(code_of([&] { shape_values("record:a", t); }), ErrorCode::MalformedReply);
  EXPECT_EQ(code_of([&] { shape_values("map:k:c", t); }), ErrorCode::MalformedReply);
  EXPECT_EQ(code_of([&] { shape_values("table:k", t); }), ErrorCode::InvalidArgument);
  query::ResultTable empty{{"a"}, {}};
  EXPECT_EQ(shape_values("record:a", empty), (json{{"a", nullptr}}));
}

TEST(Shapes, ValuesMatchTolerance) {
  EXPECT_TRUE(values_match(json{{"a", 1000.0}}, json{{"a", 1000.0 * (1 + 1e-12)}}));
  EXPECT_FALSE(values_match(json{{"a", 1000.0}}, json{{"a", 1000.1}}));
  EXPECT_FALSE(values_match(json{{"a", 1}}, json{{"a", 2}}));
  EXPECT_TRUE(values_match(json{{"a", 2}}, json{{"a", 2u}}));
  EXPECT_FALSE(values_match(json{{"a", 1}}, json{{"a", 1}, {"b", 1}}));
  EXPECT_FALSE(values_match(json::array({1, 2}), json::array({2, 1})));
}

// ---- classification ---------------------------------------------------------

TEST(Classify, CanonicalQuestionsAreOperational) {
  RulePlanner p(describe_schema(default_world().graph));
  for (const auto& q : analytics::canonical_questions())
    EXPECT_EQ(classify_query(q.text, &p), QueryClass::Operational) << q.id;
}

TEST(Classify, CausalCuesAreInvestigative) {
  for (const char* q : {"Why did CamelCargo's discharge take so long?", "Which stage is the bottleneck?",
                        "What is the root cause of the forklift delays?",
                        "CamelCargo's discharge was slower than the rest; what happened?",
                        "Reveal what held up the unloading."})
    EXPECT_EQ(classify_query(q), QueryClass::Investigative) << q;
  EXPECT_EQ(classify_query("How many packages took longer than an hour?"), QueryClass::Operational);
  EXPECT_EQ(classify_query("Something unrelated entirely"), QueryClass::Operational);
}

namespace {

// Answers classification hints only; everything else is unreachable.
class HintOnly : public PlannerProvider {
 public:
  explicit HintOnly(std::optional<QueryClass> hint) : hint_(hint) {}
  std::string name() const override { return "hint"; }
  std::optional<QueryClass> classify_hint(const std::string&) override {
    ++calls;
    return hint_;
  }
  std::vector<PlanStep> plan(const std::string&, const SchemaDescriptor&) override { return {}; }
  std::string to_query(const QueryRequest&) override { return ""; }
  NextMove next_subquestion(const std::string&, const std::vector<EvidenceItem>&) override { return {true, "", ""}; }
  std::string summarize(const std::string&, const std::vector<StepOutcome>&) override { return ""; }
  int calls = 0;

 private:
  std::optional<QueryClass> hint_;
};

}  // namespace

TEST(Classify, ProviderConsultedOnlyWhenRulesAbstain) {
  HintOnly yes(QueryClass::Investigative);
  EXPECT_EQ(classify_query("Tell me about dock three", &yes), QueryClass::Investigative);
  EXPECT_EQ(yes.calls, 1);
  EXPECT_EQ(classify_query("Why is dock three idle?", &yes), QueryClass::Investigative);
  EXPECT_EQ(yes.calls, 1);
  HintOnly none(std::nullopt);
  EXPECT_EQ(classify_query("Tell me about dock three", &none), QueryClass::Operational);
}

// ---- oracle equivalence -------------------------------------------------------

class OracleEquivalence : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OracleEquivalence, EveryCanonicalQuestionMatchesTheOracle) {
  const World w(seeded(GetParam()));
  RulePlanner p(describe_schema(w.graph));
  for (const auto& q : analytics::canonical_questions()) {
    const auto r = run_qa_chain(q.text, w.graph, p);
    const auto want = analytics::answer_canonical(q.id, w.log);
    EXPECT_TRUE(values_match(r.values, want, 1e-9)) << q.id << "\n got  " << r.values.dump() << "\n want "
                                                    << want.dump();
    for (const auto& s : r.steps) EXPECT_EQ(s.attempts, 1);
    EXPECT_FALSE(r.answer.empty());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleEquivalence, ::testing::Range<std::uint64_t>(1, 21));

TEST(OracleEquivalence, PackageStageTableMatchesStageTimes) {
  const auto& w = default_world();
  RulePlanner p(describe_schema(w.graph));
  const auto r = run_qa_chain("For each package from supplier DeltaDrops, show its waiting time at each process stage.",
                              w.graph, p);
  const auto oracle = analytics::stage_times(w.log);
  std::size_t expected = 0;
  for (const auto& pk : w.log.packages) expected += pk.supplier_id == "DeltaDrops";
  ASSERT_EQ(r.values["packages"].size(), expected);
  for (const auto& row : r.values["packages"]) {
    const auto& t = oracle.at(row["package_id"].get<std::string>());
    for (std::size_t i = 0; i < sim::kAllStages.size(); ++i)
      EXPECT_NEAR(row[std::string(sim::stage_key(sim::kAllStages[i]))].get<double>(), t[i], 1e-9);
  }
}

TEST(OracleEquivalence, MultiStepPlanPassesPriorValues) {
  const auto& w = default_world();
  RulePlanner p(describe_schema(w.graph));
  const auto r = run_qa_chain(analytics::canonical_question("P5").text, w.graph, p);
  ASSERT_EQ(r.steps.size(), 2u);
  const auto avg = r.steps[0].values["average_discharge_seconds"].get<double>();
  EXPECT_NE(r.steps[1].query.find(format_double(avg)), std::string::npos);
}

// ---- self-reflection ----------------------------------------------------------

namespace {

// Records the error text each attempt receives.
class Recording : public PlannerProvider {
 public:
  explicit Recording(PlannerProvider& inner) : inner_(inner) {}
  std::string name() const override { return "recording"; }
  std::optional<QueryClass> classify_hint(const std::string& q) override { return inner_.classify_hint(q); }
  std::vector<PlanStep> plan(const std::string& q, const SchemaDescriptor& s) override { return inner_.plan(q, s); }
  std::string to_query(const QueryRequest& r) override {
    seen.push_back(r.last_error);
    attempts.push_back(r.attempt);
    return inner_.to_query(r);
  }
  NextMove next_subquestion(const std::string& m, const std::vector<EvidenceItem>& e) override {
    return inner_.next_subquestion(m, e);
  }
  std::string summarize(const std::string& q, const std::vector<StepOutcome>& r) override {
    return inner_.summarize(q, r);
  }
  std::vector<std::optional<std::string>> seen;
  std::vector<int> attempts;

 private:
  PlannerProvider& inner_;
};

}  // namespace

TEST(SelfReflection, RecoversWithinRetryBudget) {
  const auto& w = default_world();
  const auto& q = analytics::canonical_question("S3");
  for (int k = 1; k <= 3; ++k) {
    RulePlanner rule(describe_schema(w.graph));
    FaultInjectingProvider faulty(rule, {k - 1, 0.0, 1, false});
    Recording rec(faulty);
    const auto r = run_qa_chain(q.text, w.graph, rec, {3});
    EXPECT_EQ(r.steps[0].attempts, k);
    EXPECT_EQ(rec.attempts.size(), static_cast<std::size_t>(k));
    EXPECT_FALSE(rec.seen[0].has_value());
    for (int i = 1; i < k; ++i) EXPECT_TRUE(rec.seen[static_cast<std::size_t>(i)].has_value());
    EXPECT_TRUE(values_match(r.values, analytics::answer_canonical("S3", w.log)));
  }
}

TEST(SelfReflection, ExhaustsAfterMaxRetries) {
  const auto& w = default_world();
  RulePlanner rule(describe_schema(w.graph));
  FaultInjectingProvider faulty(rule, {3, 0.0, 1, false});
  try {
    run_qa_chain(analytics::canonical_question("S3").text, w.graph, faulty, {3});
    FAIL() << "expected STEP_EXHAUSTED";
  } catch (const StepExhausted& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepExhausted);
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_EQ(e.step(), 0);
    EXPECT_FALSE(e.last_error().empty());
  }
  EXPECT_EQ(faulty.injected(), 3);
  EXPECT_EQ(code_of([&] { run_qa_chain("x", w.graph, rule, {0}); }), ErrorCode::InvalidArgument);
}

TEST(SelfReflection, SecondStepRetriesIndependently) {
  const auto& w = default_world();
  RulePlanner rule(describe_schema(w.graph));
  FaultInjectingProvider faulty(rule, {2, 0.0, 1, false});
  const auto r = run_qa_chain(analytics::canonical_question("S4").text, w.graph, faulty, {3});
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(r.steps[0].attempts, 3);
  EXPECT_EQ(r.steps[1].attempts, 3);
  EXPECT_TRUE(values_match(r.values, analytics::answer_canonical("S4", w.log)));
}

TEST(FaultInjection, RateExtremes) {
  const auto& w = default_world();
  RulePlanner rule(describe_schema(w.graph));
  FaultInjectingProvider never(rule, {0, 0.0, 3, false});
  FaultInjectingProvider always(rule, {0, 1.0, 3, false});
  const auto& q = analytics::canonical_question("F2").text;
  EXPECT_NO_THROW(run_qa_chain(q, w.graph, never));
  EXPECT_EQ(never.injected(), 0);
  EXPECT_EQ(code_of([&] { run_qa_chain(q, w.graph, always); }), ErrorCode::StepExhausted);
  EXPECT_EQ(code_of([&] { FaultInjectingProvider bad(rule, {0, 1.5, 3, false}); }), ErrorCode::InvalidArgument);
}

// ---- investigations ---------------------------------------------------------------

TEST(Investigation, ScenarioOneFollowsTheSupplierPlaybook) {
  for (std::uint64_t seed : {1, 7, 13}) {
    const World w(sim::apply_scenario(seeded(seed), kScenarioOne));
    RulePlanner p(describe_schema(w.graph));
    const auto t = run_investigation("Why did CamelCargo's discharge take longer than the other suppliers?", w.graph, p);
    ASSERT_EQ(t.items.size(), 4u);
    EXPECT_EQ(t.terminated_by, "sufficient");
    const std::vector<std::string> facets{"discharge", "supplier_wait", "utilization", "stage_deviation"};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(t.items[i].facet, facets[i]);
    EXPECT_EQ(t.verdict["subject"], "CamelCargo");
    EXPECT_EQ(t.verdict["verdict"], "WaitToWorker");
    EXPECT_EQ(t.verdict["verdict"].get<std::string>(),
              sim::stage_name(analytics::bottleneck_report(w.log, "CamelCargo").verdict));
    EXPECT_GE(t.verdict["verdict_ratio"].get<double>(), 1.2);
    EXPECT_GT(t.verdict["findings"]["discharge_ratio"].get<double>(), 1.0);
    EXPECT_NE(t.final_summary.find("Wait to Worker"), std::string::npos);
  }
}

TEST(Investigation, ScenarioTwoNamesTheDegradedForklift) {
  for (std::uint64_t seed : {2, 7, 19}) {
    const World w(sim::apply_scenario(seeded(seed), kScenarioTwo));
    RulePlanner p(describe_schema(w.graph));
    const auto t = run_investigation("Why are packages waiting so long for forklifts?", w.graph, p);
    EXPECT_LE(t.items.size(), 4u);
    EXPECT_EQ(t.terminated_by, "sufficient");
    EXPECT_EQ(t.items[0].facet, "forklift_wait");
    EXPECT_EQ(t.verdict["findings"]["max_wait_forklift"], "FL_00");
    EXPECT_EQ(t.verdict["findings"]["min_utilization_forklift"], "FL_00");
    EXPECT_EQ(t.verdict["subject"], "FL_00");
    EXPECT_EQ(t.verdict["verdict"].get<std::string>(),
              sim::stage_name(analytics::bottleneck_report(w.log, "FL_00").verdict));
  }
}

TEST(Investigation, VerdictStageTableMatchesOracle) {
  const World w(sim::apply_scenario(seeded(5), kScenarioOne));
  RulePlanner p(describe_schema(w.graph));
  const auto t = run_investigation("Why is CamelCargo the bottleneck?", w.graph, p);
  const auto report = analytics::bottleneck_report(w.log, "CamelCargo");
  ASSERT_EQ(t.verdict["stages"].size(), report.stages.size());
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    EXPECT_NEAR(t.verdict["stages"][i]["subject_mean"].get<double>(), report.stages[i].subject_mean, 1e-9);
    EXPECT_NEAR(t.verdict["stages"][i]["global_mean"].get<double>(), report.stages[i].global_mean, 1e-9);
  }
  const auto agv = t.verdict["utilization"][0];
  EXPECT_EQ(agv["class"], "AGV");
  EXPECT_NEAR(agv["subject"].get<double>(), report.utilization[0].subject.value(), 1e-9);
  EXPECT_NEAR(agv["global"].get<double>(), report.utilization[0].global.value(), 1e-9);
}

TEST(Investigation, DeterministicTrace) {
  const World w(sim::apply_scenario(seeded(3), kScenarioTwo));
  RulePlanner a(describe_schema(w.graph)), b(describe_schema(w.graph));
  const auto q = "What is the bottleneck in forklift handling?";
  EXPECT_EQ(to_json(run_investigation(q, w.graph, a)).dump(), to_json(run_investigation(q, w.graph, b)).dump());
}

TEST(Investigation, BudgetExhaustion) {
  const auto& w = default_world();
  RulePlanner rule(describe_schema(w.graph));
  FaultInjectingProvider stubborn(rule, {0, 0.0, 1, true});
  const auto t = run_investigation("Why is CamelCargo slow?", w.graph, stubborn, {1, 3});
  EXPECT_EQ(t.items.size(), 1u);
  EXPECT_EQ(t.budget_used, 1);
  EXPECT_EQ(t.terminated_by, "budget");
  EXPECT_NE(t.final_summary.find("Budget of 1"), std::string::npos);
  EXPECT_EQ(code_of([&] { run_investigation("why", w.graph, rule, {0, 3}); }), ErrorCode::InvalidArgument);
}

TEST(Investigation, FailedStepsAreRecordedAndTheLoopContinues) {
  const World w(sim::apply_scenario(seeded(4), kScenarioOne));
  RulePlanner rule(describe_schema(w.graph));
  FaultInjectingProvider broken(rule, {3, 0.0, 1, false});
  const auto t = run_investigation("Why is CamelCargo slow?", w.graph, broken, {8, 3});
  ASSERT_EQ(t.items.size(), 4u);
  for (const auto& e : t.items) {
    ASSERT_TRUE(e.error.has_value());
    EXPECT_NE(e.error->find("STEP_EXHAUSTED"), std::string::npos);
    EXPECT_FALSE(e.query_text.empty());
    EXPECT_EQ(e.attempt_count, 3);
  }
  EXPECT_TRUE(t.verdict["verdict"].is_null());
  EXPECT_NE(t.final_summary.find("inconclusive"), std::string::npos);
}

TEST(Investigation, TraceCompleteness) {
  const World w(sim::apply_scenario(seeded(9), kScenarioOne));
  RulePlanner p(describe_schema(w.graph));
  const auto t = run_investigation("What is the root cause of slow unloading?", w.graph, p);
  for (const auto& e : t.items) {
    EXPECT_FALSE(e.sub_question.empty());
    EXPECT_FALSE(e.plan.empty());
    EXPECT_FALSE(e.query_text.empty());
    EXPECT_NE(e.result.has_value(), e.error.has_value());
    EXPECT_LE(e.attempt_count, 3);
  }
  // With no supplier named the playbook ranks suppliers first.
  EXPECT_EQ(t.items.front().facet, "discharge_ranking");
  EXPECT_EQ(t.verdict["subject"], t.verdict["findings"]["slowest_supplier"]);
  const auto table = render_trace(t);
  EXPECT_NE(table.find("| # | Sub-question | Plan | Query | Result |"), std::string::npos);
  EXPECT_NE(table.find(t.final_summary), std::string::npos);
}

TEST(Investigation, SufficiencyPolicy) {
  EvidenceItem stage;
  stage.facet = "stage_deviation";
  stage.values = {{"subject", "X"}};
  for (auto s : sim::kAllStages) {
    stage.values[std::string(sim::stage_key(s)) + "_subject"] = 10.0;
    stage.values[std::string(sim::stage_key(s)) + "_global"] = 10.0;
  }
  EvidenceItem util;
  util.facet = "utilization";
  util.values = {{"subject", "X"}, {"agv_subject", 0.1}, {"agv_global", 0.5}, {"fl_subject", 0.1}, {"fl_global", 0.5}};
  EXPECT_FALSE(assess_sufficiency({stage, util}).sufficient);
  stage.values["wait_for_forklift_subject"] = 11.9;
  EXPECT_FALSE(assess_sufficiency({stage, util}).sufficient);
  stage.values["wait_for_forklift_subject"] = 12.0;
  EXPECT_TRUE(assess_sufficiency({stage, util}).sufficient);
  EXPECT_FALSE(assess_sufficiency({stage}).sufficient);
  EXPECT_FALSE(assess_sufficiency({stage, util}, {1.3}).sufficient);
  util.error = "failed";
  EXPECT_FALSE(assess_sufficiency({stage, util}).sufficient);
}

TEST(Ask, DispatchesOnClass) {
  const auto& w = default_world();
  RulePlanner p(describe_schema(w.graph));
  const auto op = ask("How many packages are handled by each forklift?", w.graph, p);
  EXPECT_EQ(op.cls, QueryClass::Operational);
  ASSERT_TRUE(op.qa);
  EXPECT_TRUE(values_match(op.qa->values, analytics::answer_canonical("F2", w.log)));
  const auto inv = ask("Why is DeltaDrops slow?", w.graph, p);
  EXPECT_EQ(inv.cls, QueryClass::Investigative);
  ASSERT_TRUE(inv.investigation);
  EXPECT_EQ(to_json(inv)["class"], "investigative");
}

// ---- remote planner ---------------------------------------------------------------

namespace {

// Chat endpoint that replays scripted message contents in order.
class MockChat {
 public:
  MockChat() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::string content;
      {
        std::lock_guard<std::mutex> lock(mu_);
        requests.push_back(json::parse(req.body));
        auth.push_back(req.get_header_value("Authorization"));
        if (replies_.empty()) {
          res.status = 500;
          return;
        }
        content = replies_.front();
        replies_.pop_front();
      }
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      res.set_content(json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockChat() {
    server_.stop();
    thread_.join();
  }
  void reply(std::string content) {
    std::lock_guard<std::mutex> lock(mu_);
    replies_.push_back(std::move(content));
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

  std::vector<json> requests;
  std::vector<std::string> auth;
  std::chrono::milliseconds delay{0};

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::deque<std::string> replies_;
};

RemotePlannerConfig config_for(const MockChat& m, double temperature = 0.1) {
  RemotePlannerConfig c;
  c.endpoint = m.url();
  c.temperature = temperature;
  c.timeout_seconds = 5;
  c.auth_token = "secret";
  return c;
}

}  // namespace

TEST(RemotePlanner, TemperatureAndEndpointValidation) {
  RemotePlannerConfig c;
  c.endpoint = "http://127.0.0.1:9/x";
  for (double t : {0.0, 0.3}) {
    c.temperature = t;
    EXPECT_NO_THROW(RemotePlanner{c});
  }
  for (double t : {-0.01, 0.31, 1.0}) {
    c.temperature = t;
    EXPECT_EQ(code_of([&] { RemotePlanner p(c); }), ErrorCode::ConfigInvalid) << t;
  }
  c.temperature = 0.1;
  for (const char* url : {"https://example.com/v1", "ftp://host/x", "not a url", ""}) {
    c.endpoint = url;
    EXPECT_EQ(code_of([&] { RemotePlanner p(c); }), ErrorCode::ConfigInvalid) << url;
  }
}

TEST(RemotePlanner, FixedPlanBehavesLikeTheRulePlanner) {
  const auto& w = default_world();
  RulePlanner rule(describe_schema(w.graph));
  const auto& q = analytics::canonical_question("S3").text;
  const auto rule_steps = rule.plan(q, rule.schema());
  const auto query = rule.to_query({q, rule_steps[0], &rule.schema(), nullptr, std::nullopt, 1});

  MockChat mock;
  mock.reply(json{{"steps", {{{"intent", rule_steps[0].intent}, {"expected_output", rule_steps[0].expected_output}}}}}
                 .dump());
  mock.reply("```json\n" + json{{"query", query}}.dump() + "\n```");
  mock.reply(R"({"summary": "SunnySupplies finished first."})");
  RemotePlanner remote(config_for(mock));
  const auto r = run_qa_chain(q, w.graph, remote);
  EXPECT_EQ(r.values, run_qa_chain(q, w.graph, rule).values);
  EXPECT_EQ(r.answer, "SunnySupplies finished first.");
  ASSERT_EQ(mock.requests.size(), 3u);
  for (const auto& req : mock.requests) {
    EXPECT_DOUBLE_EQ(req["temperature"].get<double>(), 0.1);
    EXPECT_EQ(req["messages"][0]["role"], "system");
    EXPECT_EQ(req["prompt_version"], prompts::kPromptVersion);
  }
  EXPECT_EQ(mock.auth[0], "Bearer secret");
  EXPECT_NE(mock.requests[1]["messages"][1]["content"].get<std::string>().find("SUPPLIER_TO_WORKER"),
            std::string::npos);
}

TEST(RemotePlanner, LastErrorReachesThePrompt) {
  const auto& w = default_world();
  MockChat mock;
  mock.reply(R"({"steps": [{"intent": "count suppliers", "expected_output": "record:n"}]})");
  mock.reply(R"({"query": "MATCH (s:SUPPLIER RETURN count(s) AS n"})");
  mock.reply(R"({"query": "MATCH (s:SUPPLIER) RETURN count(s) AS n"})");
  mock.reply(R"({"summary": "ok"})");
  RemotePlanner remote(config_for(mock));
  const auto r = run_qa_chain("How many suppliers are there?", w.graph, remote);
  EXPECT_EQ(r.values["n"], static_cast<std::int64_t>(w.log.supplier_records.size()));
  EXPECT_EQ(r.steps[0].attempts, 2);
  const auto second = mock.requests[2]["messages"][1]["content"].get<std::string>();
  EXPECT_NE(second.find("SYNTAX_ERROR"), std::string::npos);
}

TEST(RemotePlanner, OneReformatRetryThenMalformed) {
  MockChat mock;
  mock.reply("I think the class is operational.");
  mock.reply(R"({"class": "investigative"})");
  RemotePlanner remote(config_for(mock));
  EXPECT_EQ(remote.classify_hint("anything"), QueryClass::Investigative);
  ASSERT_EQ(mock.requests.size(), 2u);
  EXPECT_EQ(mock.requests[1]["messages"].size(), 4u);

  mock.reply("nope");
  mock.reply(R"({"class": "sideways"})");
  EXPECT_EQ(code_of([&] { remote.classify_hint("anything"); }), ErrorCode::MalformedReply);
  EXPECT_EQ(mock.requests.size(), 4u);

  mock.reply(R"({"sufficient": false})");
  mock.reply(R"({"sufficient": false, "sub_question": "What is the total discharge time of each supplier?"})");
  const auto move = remote.next_subquestion("why", {});
  EXPECT_FALSE(move.sufficient);
  EXPECT_EQ(move.sub_question, "What is the total discharge time of each supplier?");
}

TEST(RemotePlanner, UnavailableEndpoints) {
  {
    MockChat mock;  // no scripted replies: HTTP 500
    RemotePlanner remote(config_for(mock));
    EXPECT_EQ(code_of([&] { remote.classify_hint("x"); }), ErrorCode::ProviderUnavailable);
  }
  int port = 0;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  RemotePlannerConfig c;
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  c.timeout_seconds = 2;
  RemotePlanner closed(c);
  EXPECT_EQ(code_of([&] { closed.classify_hint("x"); }), ErrorCode::ProviderUnavailable);
}

TEST(RemotePlanner, TimeoutIsUnavailable) {
  MockChat mock;
  mock.delay = std::chrono::milliseconds(1500);
  mock.reply(R"({"class": "operational"})");
  auto c = config_for(mock);
  c.timeout_seconds = 0.3;
  RemotePlanner remote(c);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { remote.classify_hint("x"); }), ErrorCode::ProviderUnavailable);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(1400));
}
