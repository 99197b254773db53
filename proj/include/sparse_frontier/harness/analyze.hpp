// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sparse_frontier/core/csv.hpp"
#include "sparse_frontier/cost/formulas.hpp"
#include "sparse_frontier/cost/pareto.hpp"
#include "sparse_frontier/cost/presets.hpp"
#include "sparse_frontier/eval/stats.hpp"
#include "sparse_frontier/harness/plan_demo.hpp"
#include "sparse_frontier/harness/records.hpp"
#include "sparse_frontier/patterns/calibration.hpp"

namespace sparse_frontier::harness {

/// Task label used for the cross-task aggregate rows.
inline constexpr const char* kAllTasks = "all";

struct AnalysisOptions {
  double pareto_batch = 1;  // batch size for decode memory costs
  std::vector<cost::ModelDims> presets = cost::builtin_presets();
};

struct AnalysisTables {
  CsvTable summary{{"model", "seq_len", "task", "method", "sparsity", "n", "mean", "std_error",
                    "parse_rate", "failed"}};
  CsvTable aggregate{{"model", "seq_len", "method", "sparsity", "tasks", "mean", "std_error"}};
  CsvTable errors{{"model", "seq_len", "task", "method", "sparsity", "dense_mean", "sparse_mean",
                   "absolute_error", "relative_error"}};
  CsvTable interpolated{{"model", "seq_len", "task", "method", "sparsity", "performance"}};
  CsvTable pareto{{"phase", "seq_len", "model", "method", "sparsity", "cost", "performance",
                   "on_frontier"}};
  std::vector<cost::ParetoPoint> pareto_points;  // all candidates, frontier flagged in CSV

  void save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    summary.save(dir + "/summary.csv");
    aggregate.save(dir + "/aggregate.csv");
    errors.save(dir + "/errors.csv");
    interpolated.save(dir + "/interpolated.csv");
    pareto.save(dir + "/pareto.csv");
  }
};

namespace detail {

using ConfigKey = std::tuple<std::string, std::size_t, std::string, std::string, double>;
using MethodKey = std::tuple<std::string, std::size_t, std::string, double>;

inline std::string num(double x) { return format_number(x); }

}  // namespace detail

/// Marks the points of `points` that lie on its Pareto frontier.
inline std::vector<bool> pareto_flags(const std::vector<cost::ParetoPoint>& points) {
  const auto front = cost::pareto_frontier(points);
  std::vector<bool> flags(points.size(), false);
  for (const auto& f : front)
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!flags[i] && points[i].cost == f.cost && points[i].performance == f.performance &&
          points[i].model == f.model && points[i].sparsity == f.sparsity && points[i].method == f.method)
        flags[i] = true;
  return flags;
}

/// Sparsity levels reported on interpolated curves.
inline std::vector<double> interpolation_grid(const std::vector<double>& knots) {
  std::set<double> grid(knots.begin(), knots.end());
  for (double s : sparse_frontier::standard_sparsity_levels()) grid.insert(s);
  grid.insert(0.0);
  return {grid.begin(), grid.end()};
}

/// Pure function of the records: the latest record per key is used, failed
/// samples are counted but not scored.
inline AnalysisTables analyze(const std::vector<RunRecord>& records, const AnalysisOptions& opt = {}) {
  using sparse_frontier::detail::require;
  require<InvalidInput>(!records.empty(), "analyze needs at least one record");
  const std::string fp = records.front().fingerprint;
  for (const auto& r : records)
    require<ConfigError>(r.fingerprint == fp, "records mix config fingerprints " + fp + " and " +
                                                  r.fingerprint);
  const auto latest = latest_records(records);

  struct Cell {
    std::vector<double> scores;
    std::size_t parsed = 0;
    std::size_t failed = 0;
  };
  std::map<detail::ConfigKey, Cell> cells;
  for (const auto& [key, r] : latest) {
    Cell& c = cells[{key.model, key.seq_len, key.task, key.method, key.sparsity}];
    if (!r.ok()) {
      ++c.failed;
      continue;
    }
    c.scores.push_back(r.score);
    if (r.parse_ok) ++c.parsed;
  }

  AnalysisTables out;
  std::map<detail::ConfigKey, eval::ScoreSummary> means;
  for (const auto& [k, c] : cells) {
    const auto& [model, L, task, method, s] = k;
    if (c.scores.empty()) {
      out.summary.add_row({model, std::to_string(L), task, method, detail::num(s), "0", "", "", "",
                           std::to_string(c.failed)});
      continue;
    }
    const auto sum = eval::aggregate(c.scores);
    means[k] = sum;
    out.summary.add_row({model, std::to_string(L), task, method, detail::num(s), std::to_string(sum.n),
                         detail::num(sum.mean), detail::num(sum.std_error),
                         detail::num(static_cast<double>(c.parsed) / static_cast<double>(c.scores.size())),
                         std::to_string(c.failed)});
  }

  // Cross-task aggregate: mean of task means, SE combined in quadrature.
  std::map<detail::MethodKey, std::vector<eval::ScoreSummary>> by_method;
  for (const auto& [k, sum] : means) {
    const auto& [model, L, task, method, s] = k;
    by_method[{model, L, method, s}].push_back(sum);
  }
  std::map<detail::MethodKey, double> all_means;
  for (const auto& [k, sums] : by_method) {
    const auto& [model, L, method, s] = k;
    double mean = 0;
    double var = 0;
    for (const auto& x : sums) {
      mean += x.mean;
      var += x.std_error * x.std_error;
    }
    const double T = static_cast<double>(sums.size());
    mean /= T;
    all_means[k] = mean;
    out.aggregate.add_row({model, std::to_string(L), method, detail::num(s), std::to_string(sums.size()),
                           detail::num(mean), detail::num(std::sqrt(var) / T)});
  }

  // Per-task and cross-task series keyed by (model, L, task, method).
  using SeriesKey = std::tuple<std::string, std::size_t, std::string, std::string>;
  std::map<SeriesKey, std::vector<eval::CurvePoint>> series;
  std::map<std::tuple<std::string, std::size_t, std::string>, double> dense;
  for (const auto& [k, sum] : means) {
    const auto& [model, L, task, method, s] = k;
    if (method == "dense") dense[{model, L, task}] = sum.mean;
    else series[{model, L, task, method}].push_back({s, sum.mean});
  }
  for (const auto& [k, mean] : all_means) {
    const auto& [model, L, method, s] = k;
    if (method == "dense") dense[{model, L, kAllTasks}] = mean;
    else series[{model, L, kAllTasks, method}].push_back({s, mean});
  }

  for (const auto& [k, pts] : series) {
    const auto& [model, L, task, method] = k;
    const auto d = dense.find({model, L, task});
    for (const auto& p : pts) {
      if (d == dense.end()) continue;
      const std::string rel =
          d->second > 0 ? detail::num(eval::relative_error(d->second, p.performance)) : "";
      out.errors.add_row({model, std::to_string(L), task, method, detail::num(p.sparsity),
                          detail::num(d->second), detail::num(p.performance),
                          detail::num(eval::absolute_error(d->second, p.performance)), rel});
    }
    auto knots = pts;
    if (d != dense.end()) knots.push_back({0.0, d->second});
    const eval::SparsityCurve curve(knots);
    std::vector<double> levels;
    for (const auto& p : curve.points()) levels.push_back(p.sparsity);
    for (double q : interpolation_grid(levels)) {
      if (q < curve.min_sparsity() || q > curve.max_sparsity()) continue;
      out.interpolated.add_row({model, std::to_string(L), task, method, detail::num(q),
                                detail::num(eval::interpolate(curve, q))});
    }
  }

  // isoCost candidates per phase and length, over the cross-task aggregate.
  std::map<std::pair<std::string, std::size_t>, std::vector<cost::ParetoPoint>> groups;
  for (const auto& [k, mean] : all_means) {
    const auto& [model, L, method, s] = k;
    const cost::ModelDims* dims = nullptr;
    for (const auto& m : opt.presets)
      if (m.name == model) dims = &m;
    require<ConfigError>(dims != nullptr, "no cost preset for model " + model);
    const double rho = 1.0 - s;
    for (const char* phase : {"prefill", "decode"}) {
      const bool prefill = std::string(phase) == "prefill";
      if (method != "dense" && is_prefill_method(method) != prefill) continue;
      const double c = prefill ? cost::prefill_flops(dims->spec(L, 1, rho)).total
                               : cost::decode_memory(dims->spec(L, opt.pareto_batch, rho)).total;
      groups[{phase, L}].push_back({c, mean, model, s, method});
    }
  }
  for (const auto& [g, pts] : groups) {
    const auto flags = pareto_flags(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      out.pareto.add_row({g.first, std::to_string(g.second), p.model, p.method, detail::num(p.sparsity),
                          detail::num(p.cost), detail::num(p.performance), flags[i] ? "1" : "0"});
      out.pareto_points.push_back(p);
    }
  }
  return out;
}

}  // namespace sparse_frontier::harness
