// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "sparse_frontier/harness/analyze.hpp"
#include "sparse_frontier/harness/plan_demo.hpp"
#include "sparse_frontier/harness/remote_adapter.hpp"
#include "sparse_frontier/harness/runner.hpp"
#include "support/oracles.hpp"

namespace hn = sparse_frontier::harness;
namespace tg = sparse_frontier::taskgen;
namespace sf = sparse_frontier;
namespace fs = std::filesystem;

namespace {

hn::ExperimentConfig small_config() {
  return hn::config_from_json(nlohmann::json::parse(R"({
    "tasks": ["niah", "vt", {"kind": "story_multihop"}],
    "methods": ["vertical_slash", {"method": "quest", "params": {"page_size": 16}}],
    "sparsity_levels": [0, 0.5, 0.9],
    "seq_lengths": [2048],
    "samples_per_config": 3,
    "seed": 5
  })"));
}

std::string temp_file(const std::string& name) {
  const auto p = fs::path(::testing::TempDir()) / name;
  fs::remove(p);
  return p.string();
}

/// Fails every call whose method matches.
class FlakyAdapter : public hn::ModelAdapter {
 public:
  explicit FlakyAdapter(std::string failing) : failing_(std::move(failing)) {}
  std::string generate(const hn::GenerationRequest& r) override {
    ++calls;
    if (r.method == failing_) throw sf::AdapterError("simulated outage");
    return inner_.generate(r);
  }
  bool supports_plan_injection() const override { return true; }
  std::string name() const override { return "flaky"; }
  std::atomic<int> calls{0};

 private:
  std::string failing_;
  hn::MockAdapter inner_;
};

hn::RunRecord record(const std::string& task, const std::string& method, double s, std::size_t i,
                     double score, std::string model = "qwen2.5-7b") {
  hn::RunRecord r;
  r.fingerprint = "abc";
  r.key = {model, 4096, task, method, s, i};
  r.score = score;
  r.parse_ok = true;
  return r;
}

}  // namespace

TEST(Config, FingerprintIgnoresOrderAndExecutionKnobs) {
  auto a = small_config();
  auto b = small_config();
  std::reverse(b.tasks.begin(), b.tasks.end());
  std::reverse(b.methods.begin(), b.methods.end());
  std::reverse(b.sparsity_levels.begin(), b.sparsity_levels.end());
  b.sparsity_levels.push_back(0.5);
  b.max_in_flight = 17;
  b.pareto_batch = 8;
  EXPECT_EQ(hn::fingerprint(a), hn::fingerprint(b));
  EXPECT_EQ(hn::fingerprint(a).size(), 16u);
  b.seed = 6;
  EXPECT_NE(hn::fingerprint(a), hn::fingerprint(b));
  b = small_config();
  b.methods[1].params["page_size"] = 32;
  EXPECT_NE(hn::fingerprint(a), hn::fingerprint(b));
}

TEST(Config, ValidationErrors) {
  using nlohmann::json;
  const auto bad = [](const char* text) { return hn::config_from_json(json::parse(text)).validate(); };
  EXPECT_THROW(bad(R"({"tasks": [], "sparsity_levels": [0], "seq_lengths": [1024]})"), sf::ConfigError);
  EXPECT_THROW(bad(R"({"tasks": ["niah"], "sparsity_levels": [0.99], "seq_lengths": [1024]})"), sf::ConfigError);
  EXPECT_THROW(bad(R"({"tasks": ["nope"], "sparsity_levels": [0], "seq_lengths": [1024]})"), sf::Error);
  EXPECT_THROW(bad(R"({"tasks": ["niah"], "methods": ["magic"], "sparsity_levels": [0], "seq_lengths": [1024]})"),
               sf::Error);
  EXPECT_THROW(bad(R"({"tasks": ["niah"], "sparsity_levels": [0], "seq_lengths": [1024], "models": ["gpt"]})"),
               sf::ConfigError);
  EXPECT_THROW(hn::load_config("/nonexistent/config.json"), sf::ConfigError);
  EXPECT_NO_THROW(bad(R"({"tasks": ["niah"], "sparsity_levels": [0], "seq_lengths": [1024]})"));
}

TEST(Config, ShippedDemoConfigsLoad) {
  for (const char* name : {"mock_suite.json", "remote_example.json"})
    EXPECT_NO_THROW(hn::load_config(std::string(SFLAB_SOURCE_DIR) + "/demo/configs/" + name).validate()) << name;
}

TEST(Runner, EchoScoresOneAndEmptyScoresZero) {
  const auto config = small_config();
  for (auto mode : {hn::MockMode::echo, hn::MockMode::empty}) {
    const auto path = temp_file("echo.jsonl");
    hn::MockAdapter adapter(mode);
    const auto stats = hn::run_suite(config, adapter, path);
    EXPECT_EQ(stats.planned, 3u * 3 * 5);
    EXPECT_EQ(stats.completed, stats.planned);
    for (const auto& r : hn::read_records(path)) {
      EXPECT_TRUE(r.ok()) << r.error;
      EXPECT_EQ(r.score, mode == hn::MockMode::echo ? 1.0 : 0.0);
      EXPECT_EQ(r.parse_ok, mode == hn::MockMode::echo);
    }
  }
}

TEST(Runner, ResumeIssuesNoCalls) {
  const auto config = small_config();
  const auto path = temp_file("resume.jsonl");
  hn::MockAdapter first(hn::MockMode::simulated);
  hn::run_suite(config, first, path);
  const auto before = hn::read_records(path);
  hn::MockAdapter second(hn::MockMode::simulated);
  const auto stats = hn::run_suite(config, second, path);
  EXPECT_EQ(second.calls(), 0u);
  EXPECT_EQ(stats.skipped, stats.planned);
  EXPECT_EQ(hn::read_records(path).size(), before.size());
}

TEST(Runner, FailedRecordsAreRetried) {
  const auto config = small_config();
  const auto path = temp_file("retry.jsonl");
  FlakyAdapter flaky("quest");
  const auto first = hn::run_suite(config, flaky, path);
  EXPECT_EQ(first.failed, 3u * 3 * 2);
  hn::MockAdapter healthy;
  const auto second = hn::run_suite(config, healthy, path);
  EXPECT_EQ(healthy.calls(), 18u);
  EXPECT_EQ(second.completed, 18u);
  for (const auto& [key, r] : hn::latest_records(hn::read_records(path))) EXPECT_TRUE(r.ok());
}

TEST(Runner, PartialTrailingLineIsRepaired) {
  const auto config = small_config();
  const auto path = temp_file("partial.jsonl");
  hn::MockAdapter a;
  hn::run_suite(config, a, path);
  const auto n = hn::read_records(path).size();
  { std::ofstream(path, std::ios::app) << R"({"fingerprint": "trunc)"; }
  EXPECT_EQ(hn::read_records(path).size(), n);
  hn::MockAdapter b;
  hn::run_suite(config, b, path);
  EXPECT_EQ(b.calls(), 0u);
  EXPECT_EQ(hn::read_records(path).size(), n);
}

TEST(Runner, RejectsForeignResultsFile) {
  auto config = small_config();
  const auto path = temp_file("foreign.jsonl");
  hn::MockAdapter a;
  hn::run_suite(config, a, path);
  config.seed = 99;
  EXPECT_THROW(hn::run_suite(config, a, path), sf::ConfigError);
}

TEST(Runner, SampleSeedsIgnoreMethodAndModel) {
  auto config = small_config();
  const auto s = hn::sample_seed(config, config.tasks[0], 2048, 1);
  config.models = {"llama3.1-8b"};
  config.methods.clear();
  EXPECT_EQ(hn::sample_seed(config, config.tasks[0], 2048, 1), s);
  EXPECT_NE(hn::sample_seed(config, config.tasks[0], 2048, 2), s);
  EXPECT_NE(hn::sample_seed(config, config.tasks[1], 2048, 1), s);
}

TEST(Runner, DenseBaselineAtZeroAndCalibrationFillsBudgets) {
  const auto levels = hn::method_levels(small_config(), 16384, sf::builtin_calibration());
  ASSERT_EQ(levels.size(), 5u);
  EXPECT_EQ(levels[0].method, "dense");
  for (const auto& lv : levels)
    if (lv.method == "quest") {
      EXPECT_EQ(lv.params.at("page_size"), 16);
      EXPECT_TRUE(lv.params.count("token_budget"));
    }
}

TEST(Records, MalformedMiddleLineIsAnError) {
  const auto path = temp_file("bad.jsonl");
  {
    std::ofstream out(path);
    out << hn::record_line(record("niah", "dense", 0, 0, 1)) << "\nnot json\n"
        << hn::record_line(record("niah", "dense", 0, 1, 1)) << "\n";
  }
  EXPECT_THROW(hn::read_records(path), sf::ConfigError);
  EXPECT_TRUE(hn::read_records(temp_file("missing.jsonl")).empty());
}

TEST(Records, JsonRoundTripAndLatestWins) {
  auto r = record("vt", "quest", 0.5, 2, 0.25);
  r.response = "text\nwith newline";
  r.status = "failed";
  r.error = "boom";
  const auto back = nlohmann::json::parse(hn::record_line(r)).get<hn::RunRecord>();
  EXPECT_EQ(back.key, r.key);
  EXPECT_EQ(back.response, r.response);
  EXPECT_FALSE(back.ok());
  auto newer = record("vt", "quest", 0.5, 2, 0.75);
  const auto latest = hn::latest_records({r, newer});
  ASSERT_EQ(latest.size(), 1u);
  EXPECT_EQ(latest.begin()->second.score, 0.75);
}

TEST(Analyze, SummaryMatchesAggregateAndErrorsAreHandComputed) {
  std::vector<hn::RunRecord> recs;
  const double dense[] = {1, 1, 0, 1};
  const double sparse[] = {1, 0, 0, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    recs.push_back(record("niah", "dense", 0, i, dense[i]));
    recs.push_back(record("niah", "quest", 0.8, i, sparse[i]));
    recs.push_back(record("vt", "dense", 0, i, 0.5));
    recs.push_back(record("vt", "quest", 0.8, i, 0.25));
  }
  auto failed = record("vt", "quest", 0.8, 9, 0);
  failed.status = "failed";
  recs.push_back(failed);
  const auto t = hn::analyze(recs);

  const auto sum = sparse_frontier::eval::aggregate({1.0, 1.0, 0.0, 1.0});
  bool seen = false;
  for (const auto& row : t.summary.rows())
    if (row[2] == "niah" && row[3] == "dense") {
      EXPECT_EQ(row[5], "4");
      EXPECT_NEAR(std::stod(row[6]), sum.mean, 1e-12);
      EXPECT_NEAR(std::stod(row[7]), sum.std_error, 1e-9);
      seen = true;
    } else if (row[2] == "vt" && row[3] == "quest") {
      EXPECT_EQ(row[9], "1");
      EXPECT_EQ(row[5], "4");
    }
  EXPECT_TRUE(seen);

  // niah: dense 0.75, sparse 0.5 -> rel 1/3; vt: 0.5 vs 0.25 -> 0.5;
  // all: dense 0.625, sparse 0.375 -> 0.4.
  std::map<std::string, double> rel;
  for (const auto& row : t.errors.rows()) rel[row[2]] = std::stod(row[8]);
  EXPECT_NEAR(rel.at("niah"), 1.0 / 3, 1e-9);
  EXPECT_NEAR(rel.at("vt"), 0.5, 1e-9);
  EXPECT_NEAR(rel.at("all"), 0.4, 1e-9);

  // Quest is a decode method: dense appears in both phases, quest only in decode.
  std::size_t prefill = 0, decode = 0;
  for (const auto& row : t.pareto.rows()) (row[0] == "prefill" ? prefill : decode)++;
  EXPECT_EQ(prefill, 1u);
  EXPECT_EQ(decode, 2u);

  // Interpolation along the "all" curve between 0 and 0.8.
  bool interpolated = false;
  for (const auto& row : t.interpolated.rows())
    if (row[2] == "all" && std::abs(std::stod(row[4]) - 0.4) < 1e-9) {
      EXPECT_NEAR(std::stod(row[5]), 0.5, 1e-9);
      interpolated = true;
    }
  EXPECT_TRUE(interpolated);
}

TEST(Analyze, DenseZeroLeavesRelativeErrorBlank) {
  std::vector<hn::RunRecord> recs = {record("cwe", "dense", 0, 0, 0), record("cwe", "quest", 0.5, 0, 0)};
  const auto t = hn::analyze(recs);
  for (const auto& row : t.errors.rows()) EXPECT_EQ(row[8], "");
}

TEST(Analyze, RejectsEmptyAndMixedInput) {
  EXPECT_THROW(hn::analyze({}), sf::InvalidInput);
  auto a = record("niah", "dense", 0, 0, 1);
  auto b = record("niah", "dense", 0, 1, 1);
  b.fingerprint = "other";
  EXPECT_THROW(hn::analyze({a, b}), sf::ConfigError);
  EXPECT_THROW(hn::analyze({record("niah", "dense", 0, 0, 1, "unknown-model")}), sf::ConfigError);
}

TEST(Analyze, ParetoFlagsMatchOracle) {
  sf::Rng rng(8);
  std::vector<sf::cost::ParetoPoint> pts;
  for (int i = 0; i < 300; ++i)
    pts.push_back({1 + static_cast<double>(sf::uniform_index(rng, 50)), sf::uniform01(rng), "m", 0.1, "quest"});
  EXPECT_EQ(hn::pareto_flags(pts), oracle::pareto_oracle(pts));
}

TEST(Analyze, ReproducibleFromRecords) {
  const auto path = temp_file("repro.jsonl");
  hn::MockAdapter a(hn::MockMode::simulated);
  hn::run_suite(small_config(), a, path);
  const auto records = hn::read_records(path);
  EXPECT_EQ(hn::analyze(records).summary.str(), hn::analyze(records).summary.str());
  EXPECT_EQ(hn::analyze(records).pareto.str(), hn::analyze(records).pareto.str());
}

TEST(PlanDemo, RecallMatchesDirectComputation) {
  sf::SyntheticSpec spec;
  spec.generator = "planted_needle";
  spec.num_q_heads = 4;
  spec.num_kv_heads = 2;
  spec.seq_len = 256;
  const auto r = hn::plan_demo("vertical_slash", {{"k_v", 16}, {"k_s", 72}}, spec);
  ASSERT_TRUE(r.recall.has_value());
  const auto inputs = sf::make_synthetic_inputs(spec);
  const auto plan = hn::build_plan("vertical_slash", r.params, inputs);
  EXPECT_DOUBLE_EQ(*r.recall, sf::attention_recall(plan, inputs));
  EXPECT_THROW(hn::plan_demo("dense", {}, spec), sf::ConfigError);
}

TEST(Remote, TalksToCompletionEndpoint) {
  httplib::Server svr;
  nlohmann::json seen;
  std::string auth;
  svr.Post("/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices": [{"text": "<answer>\nok\n</answer>"}]})", "application/json");
  });
  svr.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  const int port = svr.bind_to_any_port("127.0.0.1");
  std::thread th([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  hn::RemoteAdapter adapter({base + "/v1/completions", "secret", "served", 5}, nullptr);
  hn::GenerationRequest req;
  req.prompt = "hello";
  req.max_new_tokens = 7;
  EXPECT_EQ(adapter.generate(req), "<answer>\nok\n</answer>");
  EXPECT_EQ(seen["prompt"], "hello");
  EXPECT_EQ(seen["max_tokens"], 7);
  EXPECT_EQ(seen["model"], "served");
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_FALSE(adapter.supports_plan_injection());

  hn::RemoteAdapter broken({base + "/broken", "", "m", 5}, nullptr);
  EXPECT_THROW(broken.generate(req), sf::AdapterError);
  svr.stop();
  th.join();

  EXPECT_EQ(hn::parse_completion(R"({"text": "x"})"), "x");
  EXPECT_THROW(hn::parse_completion("{}"), sf::AdapterError);
  EXPECT_THROW(hn::parse_completion("<html>"), sf::AdapterError);
  EXPECT_THROW(hn::RemoteAdapter({"localhost:80", "", "", 5}, nullptr), sf::ConfigError);
}
