// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "sparse_frontier/eval/parse.hpp"
#include "sparse_frontier/eval/score.hpp"
#include "sparse_frontier/harness/adapter.hpp"
#include "sparse_frontier/harness/config.hpp"
#include "sparse_frontier/harness/records.hpp"
#include "sparse_frontier/patterns/calibration.hpp"
#include "sparse_frontier/taskgen/taskgen.hpp"

namespace sparse_frontier::harness {

using SampleFactory = std::function<taskgen::TaskSample(std::uint64_t seed, std::size_t target_tokens)>;

/// Builds the generator for a task entry. Recognised params: niah
/// `num_pairs`; cwe `distractors`; vt `num_chains`, `chain_depth`,
/// `filler_lines`; story kinds `filter_k`, `relinquish_probability`; qa
/// `documents` (path) and `metric`.
inline SampleFactory make_sample_factory(const TaskEntry& task) {
  using taskgen::TaskKind;
  const auto& p = task.params;
  try {
    if (task.kind == TaskKind::qa) {
      sparse_frontier::detail::require<ConfigError>(p.contains("documents"),
                                                    "qa task needs a 'documents' path");
      auto docs = std::make_shared<const std::vector<taskgen::QaDocument>>(
          taskgen::load_qa_documents(p.at("documents").get<std::string>()));
      sparse_frontier::detail::require<ConfigError>(!docs->empty(), "qa document set is empty");
      const auto metric = taskgen::parse_metric_kind(p.value("metric", std::string("f1")));
      return [docs, metric](std::uint64_t seed, std::size_t target) {
        Rng rng(seed);
        const std::size_t idx = uniform_index(rng, docs->size());
        return taskgen::assemble_qa(*docs, idx, target, seed, metric);
      };
    }
    taskgen::GenerationOptions opt;
    opt.niah_pairs = p.value("num_pairs", opt.niah_pairs);
    opt.cwe_distractors = p.value("distractors", opt.cwe_distractors);
    opt.vt.num_chains = p.value("num_chains", opt.vt.num_chains);
    opt.vt.chain_depth = p.value("chain_depth", opt.vt.chain_depth);
    opt.vt.filler_lines = p.value("filler_lines", opt.vt.filler_lines);
    opt.story.filter_k = p.value("filter_k", opt.story.filter_k);
    opt.story.relinquish_probability = p.value("relinquish_probability", opt.story.relinquish_probability);
    const TaskKind kind = task.kind;
    return [kind, opt](std::uint64_t seed, std::size_t target) {
      return taskgen::generate(kind, seed, target, opt);
    };
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad params for task " + task.label() + ": " + e.what());
  }
}

/// Sample seeds depend on the task, length and index only, so every method
/// and model sees the same samples.
inline std::uint64_t sample_seed(const ExperimentConfig& c, const TaskEntry& t, std::size_t seq_len,
                                 std::size_t index) {
  return derive_seed(c.seed, fnv1a64(t.label()), seq_len, index);
}

struct MethodLevel {
  std::string method;
  double sparsity = 0;
  Params params;
};

/// Dense baseline for level 0, then every method at every non-zero level.
/// Calibrated parameters fill whatever the config leaves unset.
inline std::vector<MethodLevel> method_levels(const ExperimentConfig& c, std::size_t seq_len,
                                              const sparse_frontier::CalibrationTable& calibration) {
  std::set<double> levels(c.sparsity_levels.begin(), c.sparsity_levels.end());
  std::vector<MethodLevel> out;
  if (levels.count(0.0)) out.push_back({"dense", 0.0, {}});
  for (const auto& m : c.methods) {
    for (double s : levels) {
      if (s == 0.0) continue;
      Params p;
      if (const auto point = calibration.lookup(m.method, seq_len, s)) p = point->params;
      for (const auto& [k, v] : m.params) p[k] = v;
      out.push_back({m.method, s, std::move(p)});
    }
  }
  return out;
}

struct RunStats {
  std::size_t planned = 0;
  std::size_t skipped = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t generation_failures = 0;
};

namespace detail {

struct WorkItem {
  RecordKey key;
  std::shared_ptr<const taskgen::TaskSample> sample;
  std::string generation_error;
  MethodLevel level;
};

inline RunRecord execute(const WorkItem& w, ModelAdapter& adapter, const ExperimentConfig& c,
                         const std::string& fp) {
  RunRecord r;
  r.fingerprint = fp;
  r.key = w.key;
  const auto start = std::chrono::steady_clock::now();
  if (!w.sample) {
    r.status = "failed";
    r.error = "generation: " + w.generation_error;
    return r;
  }
  r.sample_id = w.sample->id;
  try {
    GenerationRequest req{taskgen::render_prompt(*w.sample), c.max_new_tokens, w.sample.get(),
                          w.level.method, w.level.sparsity, w.level.params};
    r.response = adapter.generate(req);
    const auto parsed = eval::parse_answer(r.response);
    const auto scored = eval::score_response(*w.sample, r.response);
    r.parsed_answer = parsed.answer_block;
    r.parse_ok = scored.parse_ok;
    r.score = scored.score;
  } catch (const std::exception& e) {
    r.status = "failed";
    r.error = e.what();
  }
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

/// Runs every (model, length, task, sample, method level) combination and
/// appends one record per line to `results_path`. Keys already recorded as
/// ok are skipped; failed ones are retried.
inline RunStats run_suite(const ExperimentConfig& config, ModelAdapter& adapter,
                          const std::string& results_path,
                          const sparse_frontier::CalibrationTable& calibration = sparse_frontier::builtin_calibration(),
                          std::ostream* log = nullptr) {
  config.validate();
  const std::string fp = fingerprint(config);
  std::set<RecordKey> done;
  for (const auto& r : read_records(results_path)) {
    if (r.fingerprint != fp)
      throw ConfigError("results file " + results_path + " belongs to config " + r.fingerprint +
                        ", not " + fp);
    if (r.ok()) done.insert(r.key);
  }
  std::vector<SampleFactory> factories;
  for (const auto& t : config.tasks) factories.push_back(make_sample_factory(t));

  RecordWriter writer(results_path);
  RunStats stats;
  std::vector<detail::WorkItem> batch;
  auto flush = [&] {
    std::vector<std::future<RunRecord>> futures;
    for (const auto& w : batch)
      futures.push_back(std::async(std::launch::async, [&w, &adapter, &config, &fp] {
        return detail::execute(w, adapter, config, fp);
      }));
    for (auto& f : futures) {
      const RunRecord r = f.get();
      writer.append(r);
      if (r.ok()) {
        ++stats.completed;
      } else {
        ++stats.failed;
        if (log) *log << "failed " << r.key.task << " " << r.key.method << " " << r.key.sparsity
                      << " #" << r.key.sample_index << ": " << r.error << "\n";
      }
    }
    batch.clear();
  };

  for (const auto& model : config.models) {
    for (std::size_t L : config.seq_lengths) {
      const auto levels = method_levels(config, L, calibration);
      for (std::size_t t = 0; t < config.tasks.size(); ++t) {
        const std::string task = config.tasks[t].label();
        for (std::size_t i = 0; i < config.samples_per_config; ++i) {
          std::vector<RecordKey> pending;
          std::vector<const MethodLevel*> pending_levels;
          for (const auto& lv : levels) {
            RecordKey key{model, L, task, lv.method, lv.sparsity, i};
            ++stats.planned;
            if (done.count(key)) {
              ++stats.skipped;
              continue;
            }
            pending.push_back(std::move(key));
            pending_levels.push_back(&lv);
          }
          if (pending.empty()) continue;
          std::shared_ptr<const taskgen::TaskSample> sample;
          std::string gen_error;
          try {
            sample = std::make_shared<const taskgen::TaskSample>(
                factories[t](sample_seed(config, config.tasks[t], L, i), L));
          } catch (const Error& e) {
            gen_error = e.what();
            ++stats.generation_failures;
          }
          for (std::size_t k = 0; k < pending.size(); ++k) {
            batch.push_back({pending[k], sample, gen_error, *pending_levels[k]});
            if (batch.size() >= config.max_in_flight) flush();
          }
        }
      }
    }
  }
  flush();
  return stats;
}

}  // namespace sparse_frontier::harness
