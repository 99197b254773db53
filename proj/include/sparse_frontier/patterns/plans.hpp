// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"

namespace sparse_frontier {

/// Global columns plus diagonals for one query head. Offset o covers cells
/// (i, i - o).
struct VerticalSlashHead {
  KeySet verticals;
  KeySet slashes;

  friend bool operator==(const VerticalSlashHead&, const VerticalSlashHead&) = default;
};

struct VerticalSlashPlan {
  std::size_t seq_len = 0;
  std::size_t approx_window = 0;
  std::size_t forced_prefix = 4;
  std::size_t forced_local = 64;
  std::vector<VerticalSlashHead> heads;  // per query head

  friend bool operator==(const VerticalSlashPlan&, const VerticalSlashPlan&) = default;
};

/// Selected key blocks per query head and query block.
struct BlockPlan {
  std::size_t seq_len = 0;
  std::size_t block_size = 16;
  std::size_t top_k_blocks = 0;
  bool clamped = false;                          // top_k exceeded the causal block count
  std::vector<std::vector<KeySet>> selections;   // [q_head][query_block]

  std::size_t num_blocks() const noexcept { return (seq_len + block_size - 1) / block_size; }

  friend bool operator==(const BlockPlan&, const BlockPlan&) = default;
};

/// KV entries that survive eviction, per kv head.
struct EvictionPlan {
  std::size_t seq_len = 0;
  std::size_t token_capacity = 0;
  std::size_t kernel_size = 21;
  std::size_t approx_window = 256;
  bool adaptive = false;
  double min_head_fraction = 0.20;
  bool no_op = false;                // capacity >= seq_len; nothing evicted
  std::vector<KeySet> kept;          // per kv head

  std::size_t total_kept() const noexcept {
    std::size_t t = 0;
    for (const auto& k : kept) t += k.size();
    return t;
  }

  friend bool operator==(const EvictionPlan&, const EvictionPlan&) = default;
};

/// Elementwise min/max key vectors of each page, for one kv head.
struct PageReps {
  std::size_t page_size = 16;
  std::vector<std::vector<double>> mins;
  std::vector<std::vector<double>> maxs;

  std::size_t num_pages() const noexcept { return mins.size(); }
  friend bool operator==(const PageReps&, const PageReps&) = default;
};

/// Pages loaded at one decode step, per kv head.
struct PagePlan {
  std::size_t seq_len = 0;
  std::size_t page_size = 16;
  std::size_t token_budget = 0;
  std::size_t position = 0;                 // query position of the decode step
  std::vector<KeySet> selected_pages;       // per kv head, sorted page indices

  friend bool operator==(const PagePlan&, const PagePlan&) = default;
};

using SparsePlan = std::variant<VerticalSlashPlan, BlockPlan, EvictionPlan, PagePlan>;

inline bool is_decode_plan(const SparsePlan& plan) {
  return std::holds_alternative<EvictionPlan>(plan) || std::holds_alternative<PagePlan>(plan);
}

/// achieved_sparsity = 1 - computed_cells / causal_cells.
struct SparsityReport {
  double target_sparsity = -1.0;  // negative when no target was requested
  double achieved_sparsity = 0.0;
  std::size_t computed_cells = 0;
  std::size_t causal_cells = 0;
  double recall = -1.0;           // negative when not measured
  bool clamped = false;
};

inline SparsityReport make_report(std::size_t computed, std::size_t causal) {
  SparsityReport r;
  r.computed_cells = computed;
  r.causal_cells = causal;
  r.achieved_sparsity =
      causal == 0 ? 0.0 : 1.0 - static_cast<double>(computed) / static_cast<double>(causal);
  return r;
}

namespace detail {

/// Indices of `scores` ordered by descending score; ties go to the lower index.
inline std::vector<KeyIndex> rank_descending(const std::vector<double>& scores) {
  std::vector<KeyIndex> order(scores.size());
  std::iota(order.begin(), order.end(), KeyIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](KeyIndex a, KeyIndex b) { return scores[a] > scores[b]; });
  return order;
}

/// forced members (all < limit) followed by the remaining ranked indices.
inline std::vector<KeyIndex> forced_then_ranked(const std::vector<double>& scores,
                                                std::size_t forced) {
  std::vector<KeyIndex> order;
  order.reserve(scores.size());
  const std::size_t f = std::min(forced, scores.size());
  for (std::size_t i = 0; i < f; ++i) order.push_back(static_cast<KeyIndex>(i));
  for (KeyIndex idx : rank_descending(scores)) {
    if (idx >= f) order.push_back(idx);
  }
  return order;
}

inline KeySet sorted_prefix(const std::vector<KeyIndex>& order, std::size_t count) {
  KeySet out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(count, order.size())));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail
}  // namespace sparse_frontier
