// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Exact sparsity accounting, plan-to-mask expansion and attention recall.

#include <algorithm>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/patterns/block_sparse.hpp"
#include "sparse_frontier/patterns/plans.hpp"

namespace sparse_frontier {

inline constexpr std::size_t kDefaultOracleLimit = 2048;

/// Causal cells covered by verticals and slashes of one head, with overlaps
/// (cells on both a kept column and a kept diagonal) counted once.
inline std::size_t vertical_slash_cells(std::size_t n, const VerticalSlashHead& head) {
  std::size_t cells = 0;
  for (KeyIndex j : head.verticals) cells += n - j;
  for (KeyIndex o : head.slashes) cells += n - o;
  // cell (j + o, j) is on both when j + o <= n - 1
  for (KeyIndex j : head.verticals) {
    const auto limit = static_cast<KeyIndex>(n - 1 - j);
    cells -= static_cast<std::size_t>(
        std::upper_bound(head.slashes.begin(), head.slashes.end(), limit) -
        head.slashes.begin());
  }
  return cells;
}

inline std::size_t page_tokens(const PagePlan& plan, std::size_t kv_head) {
  std::size_t tokens = 0;
  for (KeyIndex p : plan.selected_pages[kv_head]) {
    const std::size_t lo = p * plan.page_size;
    const std::size_t hi = std::min(lo + plan.page_size, plan.position + 1);
    if (hi > lo) tokens += hi - lo;
  }
  return tokens;
}

/// Exact sparsity of a plan. Prefill plans count cells of the causal triangle
/// over all query heads; decode plans count tokens loaded at the decode step.
inline SparsityReport plan_sparsity(const SparsePlan& plan) {
  return std::visit(
      [](const auto& p) -> SparsityReport {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VerticalSlashPlan>) {
          const std::size_t n = p.seq_len;
          std::size_t computed = 0;
          for (const auto& head : p.heads) computed += vertical_slash_cells(n, head);
          return make_report(computed, p.heads.size() * n * (n + 1) / 2);
        } else if constexpr (std::is_same_v<T, BlockPlan>) {
          const std::size_t n = p.seq_len;
          std::size_t computed = 0;
          for (const auto& head : p.selections)
            for (std::size_t b = 0; b < head.size(); ++b)
              computed += block_row_cells(n, p.block_size, b, head[b]);
          auto r = make_report(computed, p.selections.size() * n * (n + 1) / 2);
          r.clamped = p.clamped;
          return r;
        } else if constexpr (std::is_same_v<T, EvictionPlan>) {
          return make_report(p.total_kept(), p.kept.size() * p.seq_len);
        } else {
          std::size_t computed = 0;
          for (std::size_t g = 0; g < p.selected_pages.size(); ++g) computed += page_tokens(p, g);
          return make_report(computed, p.selected_pages.size() * (p.position + 1));
        }
      },
      plan);
}

/// Row-wise permitted keys of a prefill plan (Vertical-Slash or Block).
inline CellMask to_cell_mask(const SparsePlan& plan) {
  CellMask mask;
  if (const auto* vs = std::get_if<VerticalSlashPlan>(&plan)) {
    const std::size_t n = vs->seq_len;
    mask.rows.resize(vs->heads.size());
    std::vector<char> seen(n);
    for (std::size_t h = 0; h < vs->heads.size(); ++h) {
      const auto& head = vs->heads[h];
      auto& rows = mask.rows[h];
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        KeySet& r = rows[i];
        for (KeyIndex j : head.verticals) {
          if (j > i) break;
          r.push_back(j);
        }
        for (KeyIndex o : head.slashes) {
          if (o > i) break;
          r.push_back(static_cast<KeyIndex>(i - o));
        }
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
      }
    }
    return mask;
  }
  if (const auto* bp = std::get_if<BlockPlan>(&plan)) {
    const std::size_t n = bp->seq_len;
    const std::size_t bs = bp->block_size;
    mask.rows.resize(bp->selections.size());
    for (std::size_t h = 0; h < bp->selections.size(); ++h) {
      auto& rows = mask.rows[h];
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (KeyIndex c : bp->selections[h][i / bs]) {
          const std::size_t lo = c * bs;
          const std::size_t hi = std::min(lo + bs, i + 1);
          for (std::size_t j = lo; j < hi; ++j) rows[i].push_back(static_cast<KeyIndex>(j));
        }
      }
    }
    return mask;
  }
  throw InvalidInput("decode plans have no prefill cell mask; use decode_rows");
}

/// Decode position served by a decode plan.
inline std::size_t decode_position(const SparsePlan& plan) {
  if (const auto* pp = std::get_if<PagePlan>(&plan)) return pp->position;
  if (const auto* ep = std::get_if<EvictionPlan>(&plan)) return ep->seq_len - 1;
  throw InvalidInput("prefill plans have no decode position");
}

/// Permitted keys of the decode step, one set per query head.
inline std::vector<KeySet> decode_rows(const SparsePlan& plan,
                                       const std::vector<std::size_t>& group_map) {
  std::vector<KeySet> rows(group_map.size());
  if (const auto* ep = std::get_if<EvictionPlan>(&plan)) {
    for (std::size_t h = 0; h < group_map.size(); ++h) rows[h] = ep->kept.at(group_map[h]);
    return rows;
  }
  if (const auto* pp = std::get_if<PagePlan>(&plan)) {
    for (std::size_t h = 0; h < group_map.size(); ++h) {
      for (KeyIndex p : pp->selected_pages.at(group_map[h])) {
        const std::size_t lo = p * pp->page_size;
        const std::size_t hi = std::min(lo + pp->page_size, pp->position + 1);
        for (std::size_t j = lo; j < hi; ++j) rows[h].push_back(static_cast<KeyIndex>(j));
      }
    }
    return rows;
  }
  throw InvalidInput("prefill plans have no decode rows; use to_cell_mask");
}

/// Mean dense attention mass covered by the mask, over heads and rows.
inline double attention_recall(const CellMask& mask, const AttentionInputs& inputs,
                               std::size_t oracle_limit = kDefaultOracleLimit) {
  inputs.validate();
  detail::require<InvalidInput>(inputs.seq_len() <= oracle_limit,
                                "sequence exceeds the dense oracle limit for recall");
  detail::require<InvalidInput>(mask.num_heads() == inputs.num_q_heads() &&
                                    mask.seq_len() == inputs.seq_len(),
                                "mask shape differs from inputs");
  const std::size_t n = inputs.seq_len();
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t h = 0; h < inputs.num_q_heads(); ++h) {
    for (std::size_t i = 0; i < n; ++i) {
      detail::causal_row_probs(inputs, h, i, probs);
      double covered = 0.0;
      for (KeyIndex j : mask.rows[h][i])
        if (j <= i) covered += probs[j];
      total += covered;
    }
  }
  return total / static_cast<double>(inputs.num_q_heads() * n);
}

/// Recall of any plan. Decode plans are scored on their decode row only.
inline double attention_recall(const SparsePlan& plan, const AttentionInputs& inputs,
                               std::size_t oracle_limit = kDefaultOracleLimit) {
  if (!is_decode_plan(plan)) return attention_recall(to_cell_mask(plan), inputs, oracle_limit);
  inputs.validate();
  detail::require<InvalidInput>(inputs.seq_len() <= oracle_limit,
                                "sequence exceeds the dense oracle limit for recall");
  const std::size_t pos = decode_position(plan);
  const auto rows = decode_rows(plan, inputs.group_map);
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t h = 0; h < inputs.num_q_heads(); ++h) {
    detail::causal_row_probs(inputs, h, pos, probs);
    for (KeyIndex j : rows[h])
      if (j <= pos) total += probs[j];
  }
  return total / static_cast<double>(inputs.num_q_heads());
}

/// Runs the plan through masked (or decode) attention and compares with the
/// dense reference on the same rows.
inline ApproximationError plan_output_error(const SparsePlan& plan,
                                            const AttentionInputs& inputs) {
  if (!is_decode_plan(plan)) {
    const auto sparse = masked_attention(inputs, to_cell_mask(plan));
    const auto dense = dense_prefill(inputs);
    return approximation_error(sparse.output, dense.output);
  }
  const std::size_t pos = decode_position(plan);
  const auto sparse = decode_step(inputs, pos, decode_rows(plan, inputs.group_map));
  KeySet all(pos + 1);
  for (std::size_t j = 0; j <= pos; ++j) all[j] = static_cast<KeyIndex>(j);
  const auto dense = decode_step(inputs, pos, all);
  return approximation_error(sparse.output, dense.output);
}

}  // namespace sparse_frontier
