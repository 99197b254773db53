// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::cost {

enum class LayerKind { dense, sliding };

struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  double window = 0.0;  // tokens; used by sliding layers only

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// How decode-time weight traffic counts the attention projections.
enum class WeightAccounting {
  /// d*(2d + 2*d_h*n_kv) per layer, the same shapes the prefill projection term uses.
  projection_shapes,
  /// 4*d^2 per layer, treating K and V projections as square.
  square_projections,
};

struct CostSpec {
  double L = 0;      // sequence length
  double d = 0;      // hidden size
  double h = 0;      // query heads
  double d_h = 0;    // head dim
  double n_kv = 0;   // kv heads
  double d_mlp = 0;  // MLP intermediate size
  double V = 0;      // vocabulary size
  double B = 1;      // batch size
  double rho = 1;    // attention density on dense layers
  std::vector<LayerSpec> layer_kinds;
  double bytes_per_element = 2;
  WeightAccounting weights = WeightAccounting::projection_shapes;

  std::size_t N() const noexcept { return layer_kinds.size(); }

  std::size_t dense_layers() const noexcept {
    std::size_t count = 0;
    for (const auto& l : layer_kinds) count += l.kind == LayerKind::dense;
    return count;
  }

  void validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0; };
    sparse_frontier::detail::require<InvalidInput>(positive(L) && positive(d) && positive(h) && positive(d_h) &&
                                      positive(n_kv) && positive(d_mlp) && positive(V) &&
                                      positive(B) && positive(bytes_per_element),
                                  "cost spec dimensions must be positive and finite");
    sparse_frontier::detail::require<InvalidInput>(positive(rho) && rho <= 1.0, "rho must lie in (0, 1]");
    sparse_frontier::detail::require<InvalidInput>(!layer_kinds.empty(), "cost spec needs at least one layer");
    for (const auto& l : layer_kinds) {
      sparse_frontier::detail::require<InvalidInput>(l.kind == LayerKind::dense || positive(l.window),
                                    "sliding layers need a positive window");
    }
  }
};

inline std::vector<LayerSpec> all_dense(std::size_t layers) {
  return std::vector<LayerSpec>(layers);
}

/// Every `period`-th layer is dense, the rest slide over `window` tokens.
inline std::vector<LayerSpec> interleaved_sliding(std::size_t layers, std::size_t period,
                                                  double window) {
  sparse_frontier::detail::require<InvalidInput>(period >= 1, "interleave period must be >= 1");
  std::vector<LayerSpec> out(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    if ((l + 1) % period != 0) out[l] = {LayerKind::sliding, window};
  }
  return out;
}

}  // namespace sparse_frontier::cost
