// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparse_frontier/attention/synthetic.hpp"
#include "sparse_frontier/patterns/block_sparse.hpp"
#include "sparse_frontier/patterns/calibration.hpp"
#include "sparse_frontier/patterns/eviction.hpp"
#include "sparse_frontier/patterns/quest.hpp"
#include "sparse_frontier/patterns/sparsity.hpp"
#include "sparse_frontier/patterns/vertical_slash.hpp"

namespace sparse_frontier::harness {

using Params = std::map<std::string, double>;

inline const std::vector<std::string>& sparse_methods() {
  static const std::vector<std::string> m = {"vertical_slash", "flexprefill", "block_sparse",
                                             "snapkv",         "ada_snapkv",  "quest"};
  return m;
}

inline bool is_prefill_method(const std::string& method) {
  return method == "vertical_slash" || method == "flexprefill" || method == "block_sparse";
}

inline void check_method(const std::string& method) {
  const auto& m = sparse_methods();
  sparse_frontier::detail::require<ConfigError>(
      method == "dense" || std::find(m.begin(), m.end(), method) != m.end(),
      "unknown method: " + method);
}

namespace detail {

inline std::size_t count_param(const Params& p, const std::string& name) {
  auto it = p.find(name);
  sparse_frontier::detail::require<ConfigError>(it != p.end(), "missing parameter " + name);
  sparse_frontier::detail::require<ConfigError>(it->second >= 0 && std::isfinite(it->second),
                                                "parameter " + name + " must be non-negative");
  return static_cast<std::size_t>(std::llround(it->second));
}

inline double real_param(const Params& p, const std::string& name, double fallback) {
  auto it = p.find(name);
  return it == p.end() ? fallback : it->second;
}

inline std::size_t count_param(const Params& p, const std::string& name, std::size_t fallback) {
  return p.count(name) ? count_param(p, name) : fallback;
}

}  // namespace detail

/// Builds a plan for `method` from explicit parameters (names as in the
/// calibration table, plus optional window and forcing overrides).
inline SparsePlan build_plan(const std::string& method, const Params& p,
                             const AttentionInputs& inputs) {
  using detail::count_param;
  using detail::real_param;
  if (method == "vertical_slash") {
    VerticalSlashOptions opt;
    opt.approx_window = count_param(p, "approx_window", opt.approx_window);
    opt.forced_prefix = count_param(p, "forced_prefix", opt.forced_prefix);
    opt.forced_local = count_param(p, "forced_local", opt.forced_local);
    return build_vertical_slash(inputs, count_param(p, "k_v"), count_param(p, "k_s"), opt);
  }
  if (method == "flexprefill") {
    FlexPrefillConfig cfg;
    cfg.alpha = real_param(p, "alpha", 0.0);
    cfg.min_budget = count_param(p, "min_budget", cfg.min_budget);
    cfg.approx_window = count_param(p, "approx_window", cfg.approx_window);
    cfg.forced_prefix = count_param(p, "forced_prefix", cfg.forced_prefix);
    cfg.forced_local = count_param(p, "forced_local", cfg.forced_local);
    return build_flexprefill(inputs, cfg);
  }
  if (method == "block_sparse") {
    return build_block_sparse(inputs, count_param(p, "top_k_blocks"),
                              count_param(p, "block_size", kDefaultBlockSize));
  }
  if (method == "snapkv" || method == "ada_snapkv") {
    EvictionOptions opt;
    opt.approx_window = count_param(p, "approx_window", opt.approx_window);
    opt.kernel_size = count_param(p, "kernel_size", opt.kernel_size);
    opt.forced_prefix = count_param(p, "forced_prefix", opt.forced_prefix);
    opt.forced_recent = count_param(p, "forced_recent", opt.forced_recent);
    const std::size_t cap = count_param(p, "token_capacity");
    if (method == "snapkv") return snapkv_compress(inputs, cap, opt);
    return ada_snapkv_compress(inputs, cap, real_param(p, "min_head_fraction", 0.2), opt);
  }
  if (method == "quest") {
    return build_quest(inputs, count_param(p, "token_budget"),
                       count_param(p, "page_size", kDefaultPageSize));
  }
  throw ConfigError("unknown method: " + method);
}

struct PlanDemoResult {
  SparsityReport report;
  std::optional<double> recall;  // absent above the oracle limit
  std::optional<ApproximationError> error;
  Params params;
};

/// Builds synthetic inputs from a named generator, runs the builder and
/// reports sparsity, recall and output error. A "target_sparsity" parameter
/// fills missing budget parameters from the builtin calibration table.
inline PlanDemoResult plan_demo(const std::string& method, Params params, const SyntheticSpec& spec,
                                std::size_t oracle_limit = kDefaultOracleLimit) {
  check_method(method);
  sparse_frontier::detail::require<ConfigError>(method != "dense", "plan demo needs a sparse method");
  const AttentionInputs inputs = make_synthetic_inputs(spec);
  double target = -1;
  if (auto it = params.find("target_sparsity"); it != params.end()) {
    target = it->second;
    if (auto point = builtin_calibration().lookup(method, spec.seq_len, target)) {
      for (const auto& [k, v] : point->params) params.try_emplace(k, v);
    }
  }
  const SparsePlan plan = build_plan(method, params, inputs);
  PlanDemoResult r;
  r.params = params;
  r.report = plan_sparsity(plan);
  r.report.target_sparsity = target;
  if (spec.seq_len <= oracle_limit) {
    r.recall = attention_recall(plan, inputs, oracle_limit);
    r.report.recall = *r.recall;
    r.error = plan_output_error(plan, inputs);
  }
  return r;
}

}  // namespace sparse_frontier::harness
