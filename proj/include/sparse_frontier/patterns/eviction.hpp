// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// SnapKV and Ada-SnapKV KV-cache eviction after prefill.
//
// Token importance comes from the attention of the last `approx_window`
// queries, reduced over window rows and over the query heads of each kv group
// (mean for SnapKV, max for Ada-SnapKV), then smoothed by a zero-padded 1D
// average pool. The first `forced_prefix` and last `forced_recent` tokens are
// always kept.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <tuple>
#include <vector>

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/patterns/plans.hpp"

namespace sparse_frontier {

struct EvictionOptions {
  std::size_t approx_window = 256;
  std::size_t kernel_size = 21;
  std::size_t forced_prefix = 4;
  std::size_t forced_recent = 128;
};

enum class ScoreReduction { mean, max };

namespace detail {

inline std::vector<double> average_pool(const std::vector<double>& x, std::size_t kernel) {
  if (kernel <= 1) return x;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kernel / 2);
  std::vector<double> out(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t t = i - half; t <= i + half; ++t) {
      if (t >= 0 && t < n) acc += x[static_cast<std::size_t>(t)];
    }
    out[static_cast<std::size_t>(i)] = acc / static_cast<double>(kernel);
  }
  return out;
}

inline std::vector<bool> forced_tokens(std::size_t n, const EvictionOptions& opt) {
  std::vector<bool> forced(n, false);
  for (std::size_t j = 0; j < std::min(opt.forced_prefix, n); ++j) forced[j] = true;
  for (std::size_t j = n - std::min(opt.forced_recent, n); j < n; ++j) forced[j] = true;
  return forced;
}

/// Forced tokens first (ascending), then the rest by descending score.
inline std::vector<KeyIndex> eviction_order(const std::vector<double>& scores,
                                            const std::vector<bool>& forced) {
  std::vector<KeyIndex> order;
  order.reserve(scores.size());
  for (std::size_t j = 0; j < forced.size(); ++j)
    if (forced[j]) order.push_back(static_cast<KeyIndex>(j));
  for (KeyIndex j : rank_descending(scores))
    if (!forced[j]) order.push_back(j);
  return order;
}

inline void check_capacity(std::size_t token_capacity, const EvictionOptions& opt) {
  require<InvalidInput>(token_capacity >= opt.forced_prefix + opt.forced_recent,
                        "token_capacity must cover the forced prefix and recent tokens");
}

}  // namespace detail

/// Smoothed importance of every key, per kv head.
inline std::vector<std::vector<double>> eviction_scores(const AttentionInputs& inputs,
                                                        const EvictionOptions& opt,
                                                        ScoreReduction reduction) {
  inputs.validate();
  const std::size_t n = inputs.seq_len();
  const std::size_t window = std::min(opt.approx_window, n);
  std::vector<std::vector<double>> scores(inputs.num_kv_heads());
  std::vector<double> probs;
  for (std::size_t g = 0; g < inputs.num_kv_heads(); ++g) {
    std::vector<double> acc(n, 0.0);
    const auto members = inputs.query_heads_of(g);
    for (std::size_t h : members) {
      for (std::size_t i = n - window; i < n; ++i) {
        detail::causal_row_probs(inputs, h, i, probs);
        for (std::size_t j = 0; j <= i; ++j) {
          if (reduction == ScoreReduction::mean) {
            acc[j] += probs[j];
          } else {
            acc[j] = std::max(acc[j], probs[j]);
          }
        }
      }
    }
    if (reduction == ScoreReduction::mean) {
      const double denom = static_cast<double>(window * members.size());
      for (double& v : acc) v /= denom;
    }
    scores[g] = detail::average_pool(acc, opt.kernel_size);
  }
  return scores;
}

/// Uniform per-head eviction: every kv head keeps `token_capacity` tokens.
inline EvictionPlan snapkv_compress(const AttentionInputs& inputs, std::size_t token_capacity,
                                    const EvictionOptions& opt = {}) {
  inputs.validate();
  detail::check_capacity(token_capacity, opt);
  const std::size_t n = inputs.seq_len();
  EvictionPlan plan;
  plan.seq_len = n;
  plan.token_capacity = token_capacity;
  plan.kernel_size = opt.kernel_size;
  plan.approx_window = opt.approx_window;
  plan.adaptive = false;
  plan.min_head_fraction = 1.0;
  plan.kept.resize(inputs.num_kv_heads());
  if (token_capacity >= n) {
    plan.no_op = true;
    for (auto& k : plan.kept) {
      k.resize(n);
      for (std::size_t j = 0; j < n; ++j) k[j] = static_cast<KeyIndex>(j);
    }
    return plan;
  }
  const auto scores = eviction_scores(inputs, opt, ScoreReduction::mean);
  const auto forced = detail::forced_tokens(n, opt);
  for (std::size_t g = 0; g < scores.size(); ++g) {
    plan.kept[g] = detail::sorted_prefix(detail::eviction_order(scores[g], forced),
                                         token_capacity);
  }
  return plan;
}

/// Adaptive eviction: a shared pool of num_kv_heads * token_capacity slots.
/// Each head first receives max(ceil(min_head_fraction * capacity), forced)
/// tokens; the rest of the pool goes to the globally highest remaining scores
/// (ties: lower head, then lower index).
inline EvictionPlan ada_snapkv_compress(const AttentionInputs& inputs,
                                        std::size_t token_capacity,
                                        double min_head_fraction = 0.20,
                                        const EvictionOptions& opt = {}) {
  inputs.validate();
  detail::check_capacity(token_capacity, opt);
  detail::require<InvalidInput>(min_head_fraction >= 0.0 && min_head_fraction <= 1.0,
                                "min_head_fraction must lie in [0, 1]");
  const std::size_t n = inputs.seq_len();
  const std::size_t heads = inputs.num_kv_heads();
  EvictionPlan plan;
  plan.seq_len = n;
  plan.token_capacity = token_capacity;
  plan.kernel_size = opt.kernel_size;
  plan.approx_window = opt.approx_window;
  plan.adaptive = true;
  plan.min_head_fraction = min_head_fraction;
  plan.kept.resize(heads);
  if (token_capacity >= n) {
    plan.no_op = true;
    for (auto& k : plan.kept) {
      k.resize(n);
      for (std::size_t j = 0; j < n; ++j) k[j] = static_cast<KeyIndex>(j);
    }
    return plan;
  }

  const auto scores = eviction_scores(inputs, opt, ScoreReduction::max);
  const auto forced = detail::forced_tokens(n, opt);
  std::size_t forced_count = 0;
  for (bool f : forced) forced_count += f ? 1 : 0;

  const auto floor_tokens = static_cast<std::size_t>(
      std::ceil(min_head_fraction * static_cast<double>(token_capacity) - 1e-9));
  const std::size_t floor = std::min(n, std::max(floor_tokens, forced_count));

  std::vector<std::vector<KeyIndex>> orders(heads);
  std::vector<std::size_t> take(heads, floor);
  for (std::size_t g = 0; g < heads; ++g) orders[g] = detail::eviction_order(scores[g], forced);

  const std::size_t pool = heads * token_capacity;
  std::size_t remaining = pool > heads * floor ? pool - heads * floor : 0;

  // Global top-`remaining` over the heads' next candidates: a k-way merge of
  // each head's ranking beyond its floor.
  while (remaining > 0) {
    std::size_t best_head = heads;
    double best = 0.0;
    for (std::size_t g = 0; g < heads; ++g) {
      if (take[g] >= n) continue;
      const double s = scores[g][orders[g][take[g]]];
      if (best_head == heads || s > best) {
        best = s;
        best_head = g;
      }
    }
    if (best_head == heads) break;
    ++take[best_head];
    --remaining;
  }
  for (std::size_t g = 0; g < heads; ++g) plan.kept[g] = detail::sorted_prefix(orders[g], take[g]);
  return plan;
}

}  // namespace sparse_frontier
