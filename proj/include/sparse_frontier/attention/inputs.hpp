// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparse_frontier/core/errors.hpp"
#include "sparse_frontier/core/tensor.hpp"

namespace sparse_frontier {

using KeyIndex = std::uint32_t;
using KeySet = std::vector<KeyIndex>;  // sorted, unique

/// Multi-head Q/K/V for one sequence, with grouped-query head sharing.
///
/// queries: [num_q_heads x seq_len x head_dim]
/// keys, values: [num_kv_heads x seq_len x head_dim]
/// group_map[h] is the kv head read by query head h.
struct AttentionInputs {
  Tensor3 queries;
  Tensor3 keys;
  Tensor3 values;
  std::vector<std::size_t> group_map;

  std::size_t num_q_heads() const noexcept { return queries.heads(); }
  std::size_t num_kv_heads() const noexcept { return keys.heads(); }
  std::size_t seq_len() const noexcept { return queries.rows(); }
  std::size_t head_dim() const noexcept { return queries.cols(); }
  std::size_t group_size() const noexcept {
    return num_kv_heads() == 0 ? 0 : num_q_heads() / num_kv_heads();
  }

  /// Query heads that read kv head `kv`, in increasing order.
  std::vector<std::size_t> query_heads_of(std::size_t kv) const {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < group_map.size(); ++h) {
      if (group_map[h] == kv) out.push_back(h);
    }
    return out;
  }

  /// Throws InvalidInput when shapes disagree, the grouping is uneven, or a
  /// tensor holds a non-finite entry.
  void validate() const {
    using detail::require;
    const std::size_t hq = num_q_heads();
    const std::size_t hkv = num_kv_heads();
    require<InvalidInput>(hq > 0 && hkv > 0, "attention inputs need at least one head");
    require<InvalidInput>(seq_len() > 0 && head_dim() > 0, "empty sequence or head_dim");
    require<InvalidInput>(hq % hkv == 0,
                          "num_q_heads must be a multiple of num_kv_heads");
    require<InvalidInput>(keys.rows() == seq_len() && values.rows() == seq_len(),
                          "keys/values seq_len differs from queries");
    require<InvalidInput>(keys.cols() == head_dim() && values.cols() == head_dim(),
                          "keys/values head_dim differs from queries");
    require<InvalidInput>(values.heads() == hkv, "values must have num_kv_heads heads");
    require<InvalidInput>(group_map.size() == hq, "group_map must cover every query head");
    std::vector<std::size_t> members(hkv, 0);
    for (std::size_t g : group_map) {
      require<InvalidInput>(g < hkv, "group_map references a missing kv head");
      ++members[g];
    }
    for (std::size_t m : members) {
      require<InvalidInput>(m == hq / hkv, "group_map must split query heads evenly");
    }
    require<InvalidInput>(queries.all_finite() && keys.all_finite() && values.all_finite(),
                          "attention inputs contain non-finite values");
  }

  /// Contiguous grouping: query heads [g*G, (g+1)*G) share kv head g.
  static std::vector<std::size_t> contiguous_groups(std::size_t num_q_heads,
                                                    std::size_t num_kv_heads) {
    std::vector<std::size_t> map(num_q_heads);
    const std::size_t group = num_kv_heads == 0 ? 1 : num_q_heads / num_kv_heads;
    for (std::size_t h = 0; h < num_q_heads; ++h) map[h] = group == 0 ? 0 : h / group;
    return map;
  }

  static AttentionInputs make(Tensor3 q, Tensor3 k, Tensor3 v) {
    AttentionInputs in{std::move(q), std::move(k), std::move(v), {}};
    in.group_map = contiguous_groups(in.queries.heads(), in.keys.heads());
    return in;
  }
};

/// Probability row over an explicit key support.
struct WeightRow {
  KeySet keys;
  std::vector<double> probs;
};

/// output: [num_q_heads x n_rows x head_dim]; weights, when requested, are
/// indexed [head * n_rows + row].
struct AttentionOutput {
  Tensor3 output;
  std::optional<std::vector<WeightRow>> weights;
};

/// Permitted key indices per query head and query row.
struct CellMask {
  std::vector<std::vector<KeySet>> rows;  // [q_head][query_index]

  std::size_t num_heads() const noexcept { return rows.size(); }
  std::size_t seq_len() const noexcept { return rows.empty() ? 0 : rows.front().size(); }

  std::size_t cell_count() const noexcept {
    std::size_t total = 0;
    for (const auto& head : rows)
      for (const auto& r : head) total += r.size();
    return total;
  }

  static CellMask full_causal(std::size_t num_heads, std::size_t n) {
    CellMask m;
    m.rows.assign(num_heads, std::vector<KeySet>(n));
    for (auto& head : m.rows) {
      for (std::size_t i = 0; i < n; ++i) {
        head[i].resize(i + 1);
        for (std::size_t j = 0; j <= i; ++j) head[i][j] = static_cast<KeyIndex>(j);
      }
    }
    return m;
  }

  static CellMask diagonal(std::size_t num_heads, std::size_t n) {
    CellMask m;
    m.rows.assign(num_heads, std::vector<KeySet>(n));
    for (auto& head : m.rows)
      for (std::size_t i = 0; i < n; ++i) head[i] = {static_cast<KeyIndex>(i)};
    return m;
  }
};

/// Max and mean absolute elementwise difference between two outputs.
struct ApproximationError {
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

inline ApproximationError approximation_error(const Tensor3& approx, const Tensor3& exact) {
  detail::require<InvalidInput>(approx.heads() == exact.heads() &&
                                    approx.rows() == exact.rows() &&
                                    approx.cols() == exact.cols(),
                                "output shapes differ");
  ApproximationError e;
  const auto a = approx.flat();
  const auto b = exact.flat();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    e.max_abs = std::max(e.max_abs, d);
    e.mean_abs += d;
  }
  if (!a.empty()) e.mean_abs /= static_cast<double>(a.size());
  return e;
}

}  // namespace sparse_frontier
