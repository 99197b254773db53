// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference attention: dense causal prefill, masked (sparse) prefill and a
// single-row decode step. All arithmetic is double precision and every row is
// computed independently, so results do not depend on evaluation order.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"

namespace sparse_frontier {

struct AttentionOptions {
  bool keep_weights = false;
};

namespace detail {

inline double inv_sqrt_dim(const AttentionInputs& in) {
  return 1.0 / std::sqrt(static_cast<double>(in.head_dim()));
}

/// Softmax of q_row . K[j] / sqrt(d) over `support`; writes probabilities.
inline void softmax_over(const AttentionInputs& in, std::size_t q_head, std::size_t q_row,
                         std::span<const KeyIndex> support, std::vector<double>& probs) {
  const std::size_t kv = in.group_map[q_head];
  const auto q = in.queries.row(q_head, q_row);
  const double scale = inv_sqrt_dim(in);
  probs.resize(support.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < support.size(); ++t) {
    probs[t] = dot(q, in.keys.row(kv, support[t])) * scale;
    max_logit = std::max(max_logit, probs[t]);
  }
  double total = 0.0;
  for (double& p : probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : probs) p /= total;
}

/// Dense causal probabilities of (q_head, q_row) over keys [0, q_row].
inline void causal_row_probs(const AttentionInputs& in, std::size_t q_head, std::size_t q_row,
                             std::vector<double>& probs) {
  const std::size_t kv = in.group_map[q_head];
  const auto q = in.queries.row(q_head, q_row);
  const double scale = inv_sqrt_dim(in);
  probs.resize(q_row + 1);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= q_row; ++j) {
    probs[j] = dot(q, in.keys.row(kv, j)) * scale;
    max_logit = std::max(max_logit, probs[j]);
  }
  double total = 0.0;
  for (double& p : probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : probs) p /= total;
}

inline void accumulate_values(const AttentionInputs& in, std::size_t kv,
                              std::span<const KeyIndex> support, std::span<const double> probs,
                              std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t t = 0; t < support.size(); ++t) {
    const auto v = in.values.row(kv, support[t]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += probs[t] * v[c];
  }
}

inline void check_support(std::span<const KeyIndex> support, std::size_t q_row) {
  require<RejectedPlan>(!support.empty(), "mask row is empty; force sink or local keys");
  for (std::size_t t = 0; t < support.size(); ++t) {
    require<RejectedPlan>(support[t] <= q_row, "mask row permits a future key");
    require<RejectedPlan>(t == 0 || support[t] > support[t - 1],
                          "mask row must be sorted and unique");
  }
}

}  // namespace detail

/// Causal softmax attention over every query position.
inline AttentionOutput dense_prefill(const AttentionInputs& inputs,
                                     AttentionOptions options = {}) {
  inputs.validate();
  const std::size_t hq = inputs.num_q_heads();
  const std::size_t n = inputs.seq_len();
  AttentionOutput result{Tensor3(hq, n, inputs.head_dim()), std::nullopt};
  if (options.keep_weights) result.weights.emplace(hq * n);

  KeySet support;
  std::vector<double> probs;
  for (std::size_t h = 0; h < hq; ++h) {
    const std::size_t kv = inputs.group_map[h];
    for (std::size_t i = 0; i < n; ++i) {
      detail::causal_row_probs(inputs, h, i, probs);
      support.resize(i + 1);
      for (std::size_t j = 0; j <= i; ++j) support[j] = static_cast<KeyIndex>(j);
      detail::accumulate_values(inputs, kv, support, probs, result.output.row(h, i));
      if (result.weights) (*result.weights)[h * n + i] = WeightRow{support, probs};
    }
  }
  return result;
}

/// Softmax restricted to the permitted keys of each row.
inline AttentionOutput masked_attention(const AttentionInputs& inputs, const CellMask& mask,
                                        AttentionOptions options = {}) {
  inputs.validate();
  const std::size_t hq = inputs.num_q_heads();
  const std::size_t n = inputs.seq_len();
  detail::require<RejectedPlan>(mask.num_heads() == hq, "mask head count differs from inputs");
  for (const auto& head : mask.rows) {
    detail::require<RejectedPlan>(head.size() == n, "mask row count differs from seq_len");
  }
  AttentionOutput result{Tensor3(hq, n, inputs.head_dim()), std::nullopt};
  if (options.keep_weights) result.weights.emplace(hq * n);

  std::vector<double> probs;
  for (std::size_t h = 0; h < hq; ++h) {
    const std::size_t kv = inputs.group_map[h];
    for (std::size_t i = 0; i < n; ++i) {
      const KeySet& support = mask.rows[h][i];
      detail::check_support(support, i);
      detail::softmax_over(inputs, h, i, support, probs);
      detail::accumulate_values(inputs, kv, support, probs, result.output.row(h, i));
      if (result.weights) (*result.weights)[h * n + i] = WeightRow{support, probs};
    }
  }
  return result;
}

/// Attention for the single query at `position`, one key set per query head.
/// Output has shape [num_q_heads x 1 x head_dim].
inline AttentionOutput decode_step(const AttentionInputs& inputs, std::size_t position,
                                   std::span<const KeySet> mask_rows,
                                   AttentionOptions options = {}) {
  inputs.validate();
  const std::size_t hq = inputs.num_q_heads();
  detail::require<InvalidInput>(position < inputs.seq_len(), "decode position out of range");
  detail::require<RejectedPlan>(mask_rows.size() == hq, "need one mask row per query head");
  AttentionOutput result{Tensor3(hq, 1, inputs.head_dim()), std::nullopt};
  if (options.keep_weights) result.weights.emplace(hq);

  std::vector<double> probs;
  for (std::size_t h = 0; h < hq; ++h) {
    const KeySet& support = mask_rows[h];
    detail::check_support(support, position);
    detail::softmax_over(inputs, h, position, support, probs);
    detail::accumulate_values(inputs, inputs.group_map[h], support, probs,
                              result.output.row(h, 0));
    if (result.weights) (*result.weights)[h] = WeightRow{support, probs};
  }
  return result;
}

/// Same key set for every query head.
inline AttentionOutput decode_step(const AttentionInputs& inputs, std::size_t position,
                                   const KeySet& mask_row, AttentionOptions options = {}) {
  std::vector<KeySet> rows(inputs.num_q_heads(), mask_row);
  return decode_step(inputs, position, rows, options);
}

}  // namespace sparse_frontier
