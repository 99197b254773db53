// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sparse_frontier/cost/spec.hpp"

namespace sparse_frontier::cost {

enum class CostUnit { flops, elements, bytes };

inline const char* unit_name(CostUnit u) {
  switch (u) {
    case CostUnit::flops:
      return "flops";
    case CostUnit::elements:
      return "elements";
    case CostUnit::bytes:
      return "bytes";
  }
  return "?";
}

struct CostReport {
  double total = 0;
  std::vector<std::pair<std::string, double>> components;
  double attention_share = 0;  // attention (prefill) or kv_cache (decode) over total
  CostUnit unit = CostUnit::flops;

  double component(const std::string& name) const {
    for (const auto& [n, v] : components)
      if (n == name) return v;
    throw InvalidInput("cost report has no component " + name);
  }
};

/// Memory report rescaled from elements to bytes.
inline CostReport in_bytes(const CostReport& r, double bytes_per_element) {
  sparse_frontier::detail::require<InvalidInput>(r.unit == CostUnit::elements, "only element reports convert to bytes");
  CostReport out = r;
  out.total *= bytes_per_element;
  for (auto& c : out.components) c.second *= bytes_per_element;
  out.unit = CostUnit::bytes;
  return out;
}

namespace detail {

inline double interaction_flops(const CostSpec& s) { return 4 * s.h * s.d_h + 3 * s.h; }

inline double projection_flops(const CostSpec& s) {
  return 2 * s.L * s.d * (s.d + 2 * s.d_h * s.n_kv + s.d);
}

/// Attention FLOPs of one layer. Density applies to dense layers only; a
/// sliding layer computes L * min(L, w) interactions.
inline double layer_attention_flops(const CostSpec& s, const LayerSpec& layer) {
  const double interactions = layer.kind == LayerKind::dense ? s.rho * s.L * s.L
                                                             : s.L * std::min(s.L, layer.window);
  return projection_flops(s) + interaction_flops(s) * interactions;
}

inline double layer_kv_elements(const CostSpec& s, const LayerSpec& layer) {
  if (layer.kind == LayerKind::sliding) return 2 * std::min(s.L, layer.window) * s.d_h * s.n_kv;
  return 2 * s.L * s.d_h * s.n_kv * s.rho;
}

inline double weight_elements(const CostSpec& s) {
  const double attn = s.weights == WeightAccounting::square_projections
                          ? 4 * s.d * s.d
                          : s.d * (2 * s.d + 2 * s.d_h * s.n_kv);
  return static_cast<double>(s.N()) * (attn + 3 * s.d * s.d_mlp) + s.d * s.V + s.d;
}

inline CostSpec with_rho(CostSpec s, double rho) {
  s.rho = rho;
  return s;
}

}  // namespace detail

inline CostReport prefill_flops(const CostSpec& s) {
  s.validate();
  double attention = 0;
  for (const auto& layer : s.layer_kinds) attention += detail::layer_attention_flops(s, layer);
  const double N = static_cast<double>(s.N());
  const double embedding = s.B * 2 * s.L * s.d;
  const double mlp = s.B * N * (6 * s.L * s.d * s.d_mlp + 2 * s.L * s.d_mlp);
  const double logits = s.B * 2 * s.L * s.d * s.V;
  attention *= s.B;
  CostReport r;
  r.components = {{"embedding", embedding}, {"attention", attention}, {"mlp", mlp}, {"logits", logits}};
  r.total = embedding + attention + mlp + logits;
  r.attention_share = attention / r.total;
  r.unit = CostUnit::flops;
  return r;
}

inline CostReport decode_memory(const CostSpec& s) {
  s.validate();
  double kv = 0;
  for (const auto& layer : s.layer_kinds) kv += detail::layer_kv_elements(s, layer);
  kv *= s.B;
  const double weights = detail::weight_elements(s);
  CostReport r;
  r.components = {{"weights", weights}, {"kv_cache", kv}};
  r.total = weights + kv;
  r.attention_share = kv / r.total;
  r.unit = CostUnit::elements;
  return r;
}

/// Dense over sparse total prefill FLOPs, density applied to the quadratic term.
inline double prefill_flops_speedup(const CostSpec& s) {
  return prefill_flops(detail::with_rho(s, 1.0)).total / prefill_flops(s).total;
}

/// Speedup when the whole attention block of each dense layer (projections
/// included) shrinks by the density factor and the rest is unchanged.
inline double prefill_attention_speedup(const CostSpec& s) {
  const CostSpec dense = detail::with_rho(s, 1.0);
  const double total = prefill_flops(dense).total;
  double sparsifiable = 0;
  for (const auto& layer : dense.layer_kinds) {
    if (layer.kind == LayerKind::dense) sparsifiable += detail::layer_attention_flops(dense, layer);
  }
  sparsifiable *= s.B;
  return total / (total - (1.0 - s.rho) * sparsifiable);
}

inline double decode_speedup(const CostSpec& s) {
  return decode_memory(detail::with_rho(s, 1.0)).total / decode_memory(s).total;
}

/// Importance-estimation FLOPs for Vertical-Slash, counted over dense layers.
inline double vs_indexing_flops(const CostSpec& s, double q, double k_v, double k_s) {
  s.validate();
  sparse_frontier::detail::require<InvalidInput>(q >= 0 && k_v >= 0 && k_s >= 0, "q, k_v and k_s must be >= 0");
  const double L = s.L;
  const double per_head = 2 * s.d * L * q + 3 * L * q + 2 * L * q + 2 * L * std::log2(L) +
                          (L / 64.0) * (k_v + k_s);
  return s.B * static_cast<double>(s.dense_layers()) * s.h * per_head;
}

/// Page-representation loads for Quest, counted over dense layers.
inline double quest_indexing_memory(const CostSpec& s, double page_size) {
  s.validate();
  sparse_frontier::detail::require<InvalidInput>(page_size >= 1, "page size must be >= 1");
  return s.B * static_cast<double>(s.dense_layers()) * s.n_kv * 2 * s.d * s.L / page_size;
}

}  // namespace sparse_frontier::cost
