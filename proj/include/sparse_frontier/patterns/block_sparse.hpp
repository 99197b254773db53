// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Block-Sparse prefill selection on mean-pooled 16-token blocks. Each query
// block keeps key block 0, its diagonal block and the highest-scoring other
// causal blocks, `top_k_blocks` in total.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"
#include "sparse_frontier/patterns/plans.hpp"

namespace sparse_frontier {

inline constexpr std::size_t kDefaultBlockSize = 16;

namespace detail {

/// Mean of rows [b*bs, min((b+1)*bs, n)) of tensor head `h`.
inline std::vector<std::vector<double>> pool_blocks(const Tensor3& t, std::size_t h,
                                                    std::size_t block_size) {
  const std::size_t n = t.rows();
  const std::size_t nb = (n + block_size - 1) / block_size;
  std::vector<std::vector<double>> pooled(nb, std::vector<double>(t.cols(), 0.0));
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(lo + block_size, n);
    for (std::size_t r = lo; r < hi; ++r) {
      const auto row = t.row(h, r);
      for (std::size_t c = 0; c < row.size(); ++c) pooled[b][c] += row[c];
    }
    for (double& v : pooled[b]) v /= static_cast<double>(hi - lo);
  }
  return pooled;
}

/// Number of key blocks kept for query block `b` under budget `k`.
inline std::size_t blocks_kept(std::size_t b, std::size_t k) {
  const std::size_t available = b + 1;
  return std::min(available, std::max<std::size_t>(k, b == 0 ? 1 : 2));
}

}  // namespace detail

inline BlockPlan build_block_sparse(const AttentionInputs& inputs, std::size_t top_k_blocks,
                                    std::size_t block_size = kDefaultBlockSize) {
  inputs.validate();
  detail::require<InvalidInput>(top_k_blocks >= 2,
                                "top_k_blocks must cover the sink and diagonal blocks");
  detail::require<InvalidInput>(block_size >= 1, "block_size must be positive");
  const std::size_t n = inputs.seq_len();
  BlockPlan plan;
  plan.seq_len = n;
  plan.block_size = block_size;
  plan.top_k_blocks = top_k_blocks;
  const std::size_t nb = plan.num_blocks();
  plan.clamped = top_k_blocks > nb;

  const double scale = 1.0 / std::sqrt(static_cast<double>(inputs.head_dim()));
  std::vector<std::vector<std::vector<double>>> pooled_keys(inputs.num_kv_heads());
  for (std::size_t g = 0; g < inputs.num_kv_heads(); ++g)
    pooled_keys[g] = detail::pool_blocks(inputs.keys, g, block_size);

  plan.selections.resize(inputs.num_q_heads());
  std::vector<double> scores;
  for (std::size_t h = 0; h < inputs.num_q_heads(); ++h) {
    const auto pooled_q = detail::pool_blocks(inputs.queries, h, block_size);
    const auto& pk = pooled_keys[inputs.group_map[h]];
    auto& sel = plan.selections[h];
    sel.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t keep = detail::blocks_kept(b, top_k_blocks);
      KeySet chosen{0};
      if (b > 0) chosen.push_back(static_cast<KeyIndex>(b));
      if (keep > chosen.size()) {
        // Candidates 1..b-1 ranked by pooled logit.
        scores.assign(b, 0.0);
        for (std::size_t c = 1; c < b; ++c) scores[c] = dot(pooled_q[b], pk[c]) * scale;
        for (KeyIndex c : detail::rank_descending(scores)) {
          if (chosen.size() >= keep) break;
          if (c >= 1) chosen.push_back(c);
        }
      }
      std::sort(chosen.begin(), chosen.end());
      sel[b] = std::move(chosen);
    }
  }
  return plan;
}

/// Exact causal cell count of one query block's selection.
inline std::size_t block_row_cells(std::size_t seq_len, std::size_t block_size, std::size_t b,
                                   const KeySet& key_blocks) {
  const std::size_t lo = b * block_size;
  const std::size_t rows = std::min(lo + block_size, seq_len) - lo;
  std::size_t cells = 0;
  for (KeyIndex c : key_blocks) {
    if (c < b) {
      cells += rows * block_size;  // blocks before the diagonal are always full
    } else {
      cells += rows * (rows + 1) / 2;
    }
  }
  return cells;
}

/// Achieved sparsity of a budget-k plan; it depends only on n, not on scores.
inline double block_sparsity_for_k(std::size_t seq_len, std::size_t k,
                                   std::size_t block_size = kDefaultBlockSize) {
  const std::size_t nb = (seq_len + block_size - 1) / block_size;
  std::size_t computed = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * block_size;
    const std::size_t rows = std::min(lo + block_size, seq_len) - lo;
    const std::size_t kept = detail::blocks_kept(b, k);
    computed += rows * (rows + 1) / 2;  // diagonal
    computed += (kept - 1) * rows * block_size;
  }
  const std::size_t causal = seq_len * (seq_len + 1) / 2;
  return 1.0 - static_cast<double>(computed) / static_cast<double>(causal);
}

struct BlockCalibration {
  std::size_t top_k = 2;
  double achieved_sparsity = 0.0;
  bool floor_limited = false;  // target sparsity exceeds what forced blocks allow
};

/// Smallest k whose achieved sparsity is <= target, by binary search over the
/// non-increasing map k -> sparsity(k).
inline BlockCalibration calibrate_block_topk(std::size_t seq_len, double target_sparsity,
                                             std::size_t block_size = kDefaultBlockSize) {
  detail::require<InvalidInput>(target_sparsity >= 0.0 && target_sparsity < 1.0,
                                "target sparsity must lie in [0, 1)");
  const std::size_t nb = (seq_len + block_size - 1) / block_size;
  std::size_t lo = 2;
  std::size_t hi = std::max<std::size_t>(2, nb);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (block_sparsity_for_k(seq_len, mid, block_size) <= target_sparsity) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  BlockCalibration out;
  out.top_k = lo;
  out.achieved_sparsity = block_sparsity_for_k(seq_len, lo, block_size);
  out.floor_limited = lo == 2 && out.achieved_sparsity < target_sparsity;
  return out;
}

inline BlockCalibration calibrate_block_topk(const AttentionInputs& inputs,
                                             double target_sparsity,
                                             std::size_t block_size = kDefaultBlockSize) {
  return calibrate_block_topk(inputs.seq_len(), target_sparsity, block_size);
}

}  // namespace sparse_frontier
