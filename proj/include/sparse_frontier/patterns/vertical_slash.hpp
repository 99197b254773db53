// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Vertical-Slash and FlexPrefill selection.
//
// Both estimate importance from the softmaxed attention of the last
// `approx_window` queries. A column's score is its total window mass; a
// diagonal's score is its window mass divided by the number of window cells on
// that diagonal. The first `forced_prefix` columns and the first
// `forced_local` offsets are always kept and count toward the budgets.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/patterns/plans.hpp"

namespace sparse_frontier {

struct VerticalSlashOptions {
  std::size_t approx_window = 256;
  std::size_t forced_prefix = 4;
  std::size_t forced_local = 64;
};

/// Window statistics for one query head.
struct WindowScores {
  std::vector<double> column_mass;   // raw mass per key column
  std::vector<double> diagonal_mass; // raw mass per offset
  std::vector<double> column_score;
  std::vector<double> diagonal_score;
  std::vector<KeyIndex> vertical_order;  // forced first, then by score
  std::vector<KeyIndex> slash_order;
};

namespace detail {

inline void check_vs_options(const AttentionInputs& in, const VerticalSlashOptions& opt) {
  require<InvalidInput>(opt.approx_window >= 1 && opt.approx_window <= in.seq_len(),
                        "approx_window must lie in [1, n]");
}

inline void check_vs_counts(const AttentionInputs& in, const VerticalSlashOptions& opt,
                            std::size_t k_v, std::size_t k_s) {
  require<InvalidInput>(k_v >= opt.forced_prefix,
                        "k_v must cover the forced prefix columns");
  require<InvalidInput>(k_s >= opt.forced_local, "k_s must cover the forced local offsets");
  require<InfeasibleBudget>(k_v <= in.seq_len() && k_s <= in.seq_len(),
                            "vertical/slash budget exceeds sequence length");
}

}  // namespace detail

/// Per-query-head window scores and rankings shared by both builders.
inline std::vector<WindowScores> vertical_slash_scores(const AttentionInputs& inputs,
                                                       const VerticalSlashOptions& opt) {
  inputs.validate();
  detail::check_vs_options(inputs, opt);
  const std::size_t n = inputs.seq_len();
  const std::size_t q = opt.approx_window;
  std::vector<WindowScores> out(inputs.num_q_heads());
  std::vector<double> probs;
  for (std::size_t h = 0; h < inputs.num_q_heads(); ++h) {
    WindowScores& s = out[h];
    s.column_mass.assign(n, 0.0);
    s.diagonal_mass.assign(n, 0.0);
    for (std::size_t i = n - q; i < n; ++i) {
      detail::causal_row_probs(inputs, h, i, probs);
      for (std::size_t j = 0; j <= i; ++j) {
        s.column_mass[j] += probs[j];
        s.diagonal_mass[i - j] += probs[j];
      }
    }
    s.column_score = s.column_mass;
    s.diagonal_score.resize(n);
    for (std::size_t o = 0; o < n; ++o) {
      // window rows i >= max(n - q, o) hold a cell on diagonal o
      const std::size_t cells = n - std::max(n - q, o);
      s.diagonal_score[o] = s.diagonal_mass[o] / static_cast<double>(cells);
    }
    s.vertical_order = detail::forced_then_ranked(s.column_score, opt.forced_prefix);
    s.slash_order = detail::forced_then_ranked(s.diagonal_score, opt.forced_local);
  }
  return out;
}

/// Plan keeping the top `k_v` columns and `k_s` offsets of every head.
inline VerticalSlashPlan vertical_slash_from_scores(const std::vector<WindowScores>& scores,
                                                    std::size_t seq_len,
                                                    const VerticalSlashOptions& opt,
                                                    std::size_t k_v, std::size_t k_s) {
  VerticalSlashPlan plan{seq_len, opt.approx_window, opt.forced_prefix, opt.forced_local, {}};
  plan.heads.reserve(scores.size());
  for (const auto& s : scores) {
    plan.heads.push_back({detail::sorted_prefix(s.vertical_order, k_v),
                          detail::sorted_prefix(s.slash_order, k_s)});
  }
  return plan;
}

inline VerticalSlashPlan build_vertical_slash(const AttentionInputs& inputs, std::size_t k_v,
                                              std::size_t k_s,
                                              const VerticalSlashOptions& opt = {}) {
  inputs.validate();
  detail::check_vs_options(inputs, opt);
  detail::check_vs_counts(inputs, opt, k_v, k_s);
  return vertical_slash_from_scores(vertical_slash_scores(inputs, opt), inputs.seq_len(), opt,
                                    k_v, k_s);
}

struct FlexPrefillConfig {
  double alpha = 0.0;                 // coverage fraction of window mass
  std::size_t min_budget = 512;       // per component, after forcing
  std::size_t approx_window = 256;
  std::size_t fallback_k_v = 0;       // used when alpha == 0; 0 means min_budget
  std::size_t fallback_k_s = 0;
  std::size_t forced_prefix = 4;
  std::size_t forced_local = 64;

  void validate() const {
    detail::require<InvalidInput>(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    detail::require<InvalidInput>(min_budget >= 1, "min_budget must be positive");
  }
};

namespace detail {

/// Smallest prefix of `order` whose raw mass reaches alpha of the total.
inline std::size_t coverage_prefix(const std::vector<KeyIndex>& order,
                                   const std::vector<double>& mass, double alpha) {
  if (alpha >= 1.0) return order.size();
  double total = 0.0;
  for (double m : mass) total += m;
  const double goal = alpha * total;
  double acc = 0.0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (acc >= goal) return t;
    acc += mass[order[t]];
  }
  return order.size();
}

}  // namespace detail

/// Threshold-based Vertical-Slash: every head keeps the fewest columns and
/// offsets whose window mass reaches `alpha`, but never fewer than
/// `min_budget` of each. alpha == 0 is plain Vertical-Slash at the fallback
/// counts.
inline VerticalSlashPlan build_flexprefill(const AttentionInputs& inputs,
                                           const FlexPrefillConfig& cfg) {
  inputs.validate();
  cfg.validate();
  const VerticalSlashOptions opt{cfg.approx_window, cfg.forced_prefix, cfg.forced_local};
  detail::check_vs_options(inputs, opt);
  const std::size_t n = inputs.seq_len();

  if (cfg.alpha == 0.0) {
    const std::size_t k_v = cfg.fallback_k_v ? cfg.fallback_k_v : cfg.min_budget;
    const std::size_t k_s = cfg.fallback_k_s ? cfg.fallback_k_s : cfg.min_budget;
    return build_vertical_slash(inputs, k_v, k_s, opt);
  }
  detail::require<InfeasibleBudget>(
      std::max({cfg.min_budget, cfg.forced_prefix, cfg.forced_local}) <= n,
      "min_budget or forced units exceed sequence length");

  const auto scores = vertical_slash_scores(inputs, opt);
  VerticalSlashPlan plan{n, opt.approx_window, opt.forced_prefix, opt.forced_local, {}};
  for (const auto& s : scores) {
    std::size_t k_v = detail::coverage_prefix(s.vertical_order, s.column_mass, cfg.alpha);
    std::size_t k_s = detail::coverage_prefix(s.slash_order, s.diagonal_mass, cfg.alpha);
    k_v = std::clamp(std::max({k_v, cfg.min_budget, cfg.forced_prefix}), std::size_t{1}, n);
    k_s = std::clamp(std::max({k_s, cfg.min_budget, cfg.forced_local}), std::size_t{1}, n);
    plan.heads.push_back({detail::sorted_prefix(s.vertical_order, k_v),
                          detail::sorted_prefix(s.slash_order, k_s)});
  }
  return plan;
}

}  // namespace sparse_frontier
