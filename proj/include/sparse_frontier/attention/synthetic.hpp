// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Synthetic Q/K/V generators with known attention structure.
//
//   uniform         iid N(0, 1) entries.
//   planted_needle  a few "needle" keys share a direction that every query
//                   carries, so they soak up most attention mass.
//   clustered       attention sinks at the start of the sequence, locality
//                   from a slowly drifting positional code, plus needles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"
#include "sparse_frontier/core/random.hpp"

namespace sparse_frontier {

struct SyntheticSpec {
  std::string generator = "uniform";
  std::size_t num_q_heads = 1;
  std::size_t num_kv_heads = 1;
  std::size_t head_dim = 16;
  std::size_t seq_len = 256;
  std::uint64_t seed = 42;
  /// Logit scale of planted structure (needles, sinks, locality).
  double strength = 4.0;
};

inline const std::vector<std::string>& synthetic_generators() {
  static const std::vector<std::string> names = {"uniform", "planted_needle", "clustered"};
  return names;
}

namespace detail {

inline void fill_normal(Tensor3& t, Rng& rng, double scale) {
  for (double& v : t.flat()) v = scale * standard_normal(rng);
}

inline std::vector<double> unit_direction(Rng& rng, std::size_t dim) {
  std::vector<double> u(dim);
  double norm = 0.0;
  for (double& v : u) {
    v = standard_normal(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : u) v /= norm;
  return u;
}

inline std::vector<std::size_t> needle_positions(Rng& rng, std::size_t n) {
  const std::size_t count = std::max<std::size_t>(1, n / 128);
  auto pos = sample_without_replacement(rng, n, count);
  std::sort(pos.begin(), pos.end());
  return pos;
}

}  // namespace detail

/// Builds inputs for one of `synthetic_generators()`; throws InvalidInput for
/// unknown names or inconsistent head counts.
inline AttentionInputs make_synthetic_inputs(const SyntheticSpec& spec) {
  using detail::require;
  require<InvalidInput>(spec.num_kv_heads > 0 && spec.num_q_heads % spec.num_kv_heads == 0,
                        "num_q_heads must be a multiple of num_kv_heads");
  require<InvalidInput>(spec.seq_len > 0 && spec.head_dim > 0, "empty synthetic shape");
  const auto& names = synthetic_generators();
  require<InvalidInput>(std::find(names.begin(), names.end(), spec.generator) != names.end(),
                        "unknown synthetic generator '" + spec.generator + "'");

  Rng rng(spec.seed);
  const std::size_t n = spec.seq_len;
  const std::size_t d = spec.head_dim;
  Tensor3 q(spec.num_q_heads, n, d), k(spec.num_kv_heads, n, d), v(spec.num_kv_heads, n, d);
  detail::fill_normal(q, rng, 1.0);
  detail::fill_normal(k, rng, 1.0);
  detail::fill_normal(v, rng, 1.0);

  if (spec.generator == "uniform") {
    return AttentionInputs::make(std::move(q), std::move(k), std::move(v));
  }

  const double root_d = std::sqrt(static_cast<double>(d));
  const std::size_t group = spec.num_q_heads / spec.num_kv_heads;

  // Shrink noise so planted structure dominates the logits.
  for (double& x : q.flat()) x *= 0.25;
  for (double& x : k.flat()) x *= 0.25;

  for (std::size_t g = 0; g < spec.num_kv_heads; ++g) {
    const auto needle_dir = detail::unit_direction(rng, d);
    const auto needles = detail::needle_positions(rng, n);
    // q.k contribution along a shared direction is a*b; split strength*sqrt(d).
    const double amp = std::sqrt(spec.strength * root_d);
    for (std::size_t j : needles)
      for (std::size_t c = 0; c < d; ++c) k(g, j, c) += amp * needle_dir[c];
    for (std::size_t hh = 0; hh < group; ++hh) {
      const std::size_t h = g * group + hh;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) q(h, i, c) += amp * needle_dir[c];
    }

    if (spec.generator != "clustered") continue;

    const auto sink_dir = detail::unit_direction(rng, d);
    for (std::size_t j = 0; j < std::min<std::size_t>(4, n); ++j)
      for (std::size_t c = 0; c < d; ++c) k(g, j, c) += 1.25 * amp * sink_dir[c];
    for (std::size_t hh = 0; hh < group; ++hh) {
      const std::size_t h = g * group + hh;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) q(h, i, c) += 1.25 * amp * sink_dir[c];
    }

    // Positional code: a normalised random walk whose neighbours stay close.
    std::vector<double> walk(d, 0.0);
    for (double& x : walk) x = standard_normal(rng);
    const double drift = 0.35;
    for (std::size_t i = 0; i < n; ++i) {
      double norm = 0.0;
      for (double& x : walk) {
        x += drift * standard_normal(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      for (std::size_t c = 0; c < d; ++c) {
        const double p = amp * walk[c] / norm;
        k(g, i, c) += p;
        for (std::size_t hh = 0; hh < group; ++hh) q(g * group + hh, i, c) += p;
      }
    }
  }
  return AttentionInputs::make(std::move(q), std::move(k), std::move(v));
}

}  // namespace sparse_frontier
