// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

// sflab: command line front end for task generation, plan demos, cost
// sweeps, suite runs and analysis.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sparse_frontier/harness/remote_adapter.hpp"
#include "sparse_frontier/sparse_frontier.hpp"

namespace sf = sparse_frontier;
namespace fs = std::filesystem;

namespace {

sf::harness::Params parse_params(const std::vector<std::string>& items) {
  sf::harness::Params p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw sf::ConfigError("expected key=value, got " + item);
    try {
      p[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw sf::ConfigError("parameter value is not a number: " + item);
    }
  }
  return p;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw sf::Error("cannot write " + path);
  return file;
}

struct GenArgs {
  std::vector<std::string> tasks = {"niah"};
  std::vector<std::size_t> lengths = {4096};
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  std::string qa_documents;
  std::string out;
};

int run_gen(const GenArgs& a) {
  std::ofstream file;
  std::ostream& os = output(a.out, file);
  std::vector<sf::taskgen::QaDocument> docs;
  for (const auto& name : a.tasks) {
    const auto kind = sf::taskgen::parse_task_kind(name);
    if (kind == sf::taskgen::TaskKind::qa) {
      if (a.qa_documents.empty()) throw sf::ConfigError("qa needs --qa-documents");
      if (docs.empty()) docs = sf::taskgen::load_qa_documents(a.qa_documents);
    }
    for (std::size_t L : a.lengths) {
      for (std::size_t i = 0; i < a.samples; ++i) {
        const auto seed = sf::derive_seed(a.seed, sf::fnv1a64(name), L, i);
        const auto s = kind == sf::taskgen::TaskKind::qa
                           ? sf::taskgen::assemble_qa(docs, i % docs.size(), L, seed)
                           : sf::taskgen::generate(kind, seed, L);
        os << sf::taskgen::sample_to_jsonl(s) << '\n';
      }
    }
  }
  return 0;
}

struct PlanArgs {
  std::string method = "vertical_slash";
  std::vector<std::string> params;
  std::optional<double> target;
  sf::SyntheticSpec spec;
  std::size_t oracle_limit = sf::kDefaultOracleLimit;
};

int run_plan(PlanArgs a) {
  auto params = parse_params(a.params);
  if (a.target) params["target_sparsity"] = *a.target;
  const auto r = sf::harness::plan_demo(a.method, params, a.spec, a.oracle_limit);
  nlohmann::json j = {{"method", a.method},
                      {"generator", a.spec.generator},
                      {"seq_len", a.spec.seq_len},
                      {"params", r.params},
                      {"achieved_sparsity", r.report.achieved_sparsity},
                      {"computed_cells", r.report.computed_cells},
                      {"causal_cells", r.report.causal_cells},
                      {"clamped", r.report.clamped}};
  if (r.report.target_sparsity >= 0) j["target_sparsity"] = r.report.target_sparsity;
  if (r.recall) j["recall"] = *r.recall;
  if (r.error) j["output_error"] = {{"max_abs", r.error->max_abs}, {"mean_abs", r.error->mean_abs}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct CostArgs {
  std::vector<std::string> models;
  std::string presets;
  std::vector<double> lengths = {16384, 32768, 65536, 131072};
  std::vector<double> batches = {1};
  std::vector<double> densities = {1.0, 0.5, 0.2, 0.1, 0.05};
  std::string performance;  // CSV: model,sparsity,performance
  std::string phase = "prefill";
  std::string out;
};

std::vector<sf::cost::ParetoPoint> frontier_candidates(const CostArgs& a,
                                                       const std::vector<sf::cost::ModelDims>& presets) {
  std::ifstream in(a.performance);
  if (!in) throw sf::ConfigError("cannot open " + a.performance);
  if (a.lengths.size() != 1 || a.batches.size() != 1)
    throw sf::ConfigError("frontier export needs exactly one --lengths and one --batch value");
  std::vector<sf::cost::ParetoPoint> points;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string model, sparsity, perf;
    std::getline(ss, model, ',');
    std::getline(ss, sparsity, ',');
    std::getline(ss, perf, ',');
    const auto& dims = sf::cost::find_preset(model, presets);
    const double s = std::stod(sparsity);
    const auto spec = dims.spec(a.lengths[0], a.batches[0], 1.0 - s);
    const double c = a.phase == "decode" ? sf::cost::decode_memory(spec).total
                                         : sf::cost::prefill_flops(spec).total;
    points.push_back({c, std::stod(perf), model, s, ""});
  }
  return points;
}

int run_cost(const CostArgs& a) {
  const auto presets = a.presets.empty() ? sf::cost::builtin_presets() : sf::cost::load_presets(a.presets);
  std::vector<sf::cost::ModelDims> models;
  if (a.models.empty()) models = presets;
  for (const auto& name : a.models) models.push_back(sf::cost::find_preset(name, presets));
  if (a.out.empty()) {
    sf::cost::sweep_csv(sf::cost::cost_sweep(models, a.lengths, a.batches, a.densities)).write(std::cout);
    return 0;
  }
  fs::create_directories(a.out);
  sf::cost::sweep_csv(sf::cost::cost_sweep(models, a.lengths, a.batches, a.densities))
      .save(a.out + "/sweep.csv");
  if (!a.performance.empty()) {
    const auto front = sf::cost::pareto_frontier(frontier_candidates(a, presets));
    sf::cost::frontier_csv(front).save(a.out + "/frontier.csv");
  }
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string out = "results";
  std::optional<std::string> adapter;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> lengths;
  std::vector<double> sparsity;
  std::string calibration;
};

int run_run(const RunArgs& a) {
  auto config = sf::harness::load_config(a.config);
  if (a.adapter) config.adapter = sf::harness::parse_adapter(*a.adapter);
  if (a.samples) config.samples_per_config = *a.samples;
  if (a.seed) config.seed = *a.seed;
  if (!a.lengths.empty()) config.seq_lengths = a.lengths;
  if (!a.sparsity.empty()) config.sparsity_levels = a.sparsity;
  config.validate();
  const auto calibration =
      a.calibration.empty() ? sf::builtin_calibration() : sf::CalibrationTable::load(a.calibration);

  std::unique_ptr<sf::harness::ModelAdapter> adapter;
  if (config.adapter == sf::harness::AdapterKind::remote)
    adapter = std::make_unique<sf::harness::RemoteAdapter>(sf::harness::RemoteSettings::from_env());
  else
    adapter = std::make_unique<sf::harness::MockAdapter>(config.mock_mode, config.seed);

  fs::create_directories(a.out);
  const std::string results = a.out + "/results.jsonl";
  const auto stats = sf::harness::run_suite(config, *adapter, results, calibration, &std::cerr);
  std::cout << "fingerprint " << sf::harness::fingerprint(config) << ": " << stats.planned
            << " planned, " << stats.skipped << " already done, " << stats.completed << " completed, "
            << stats.failed << " failed -> " << results << "\n";
  return stats.failed == 0 ? 0 : 3;
}

struct AnalyzeArgs {
  std::string results;
  std::string out = "analysis";
  std::string presets;
  double batch = 1;
};

int run_analyze(const AnalyzeArgs& a) {
  sf::harness::AnalysisOptions opt;
  opt.pareto_batch = a.batch;
  if (!a.presets.empty()) opt.presets = sf::cost::load_presets(a.presets);
  const auto records = sf::harness::read_records(a.results);
  if (records.empty()) throw sf::ConfigError("no records in " + a.results);
  sf::harness::analyze(records, opt).save(a.out);
  std::cout << "analyzed " << records.size() << " records -> " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse attention laboratory"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "emit task samples as JSONL");
  g->add_option("--task", gen.tasks, "task kinds")->capture_default_str();
  g->add_option("--lengths", gen.lengths, "target prompt lengths in tokens")->capture_default_str();
  g->add_option("--samples", gen.samples, "samples per task and length")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--qa-documents", gen.qa_documents, "JSON document set for qa");
  g->add_option("--out", gen.out, "output file (default stdout)");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "build a plan on synthetic inputs and report it");
  p->add_option("--method", plan.method)->capture_default_str();
  p->add_option("--param", plan.params, "method parameter as key=value");
  p->add_option("--sparsity", plan.target, "target sparsity looked up in the calibration table");
  p->add_option("--generator", plan.spec.generator)->capture_default_str();
  p->add_option("--seq-len", plan.spec.seq_len)->capture_default_str();
  p->add_option("--heads", plan.spec.num_q_heads)->capture_default_str();
  p->add_option("--kv-heads", plan.spec.num_kv_heads)->capture_default_str();
  p->add_option("--head-dim", plan.spec.head_dim)->capture_default_str();
  p->add_option("--seed", plan.spec.seed)->capture_default_str();
  p->add_option("--oracle-limit", plan.oracle_limit)->capture_default_str();

  CostArgs cost;
  auto* c = app.add_subcommand("cost", "cost sweeps and isoCost frontiers");
  c->add_option("--models", cost.models, "preset names (default all)");
  c->add_option("--presets", cost.presets, "model preset JSON file");
  c->add_option("--lengths", cost.lengths)->capture_default_str();
  c->add_option("--batch", cost.batches)->capture_default_str();
  c->add_option("--density", cost.densities)->capture_default_str();
  c->add_option("--performance", cost.performance, "CSV of model,sparsity,performance for a frontier");
  c->add_option("--phase", cost.phase)->check(CLI::IsMember({"prefill", "decode"}))->capture_default_str();
  c->add_option("--out", cost.out, "output directory (default: sweep CSV on stdout)");

  RunArgs run;
  auto* r = app.add_subcommand("run", "run an experiment suite");
  r->add_option("--config", run.config)->required();
  r->add_option("--out", run.out)->capture_default_str();
  r->add_option("--adapter", run.adapter)->check(CLI::IsMember({"mock", "remote"}));
  r->add_option("--samples", run.samples);
  r->add_option("--seed", run.seed);
  r->add_option("--lengths", run.lengths);
  r->add_option("--sparsity", run.sparsity);
  r->add_option("--calibration", run.calibration, "calibration JSON file");

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "tables and CSV exports from run records");
  a->add_option("--results", analyze.results, "results JSONL")->required();
  a->add_option("--out", analyze.out)->capture_default_str();
  a->add_option("--presets", analyze.presets, "model preset JSON file");
  a->add_option("--batch", analyze.batch, "batch size for decode costs")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) return run_gen(gen);
    if (p->parsed()) return run_plan(plan);
    if (c->parsed()) return run_cost(cost);
    if (r->parsed()) return run_run(run);
    if (a->parsed()) return run_analyze(analyze);
  } catch (const std::exception& e) {
    std::cerr << "sflab: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
