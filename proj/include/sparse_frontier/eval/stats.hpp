// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::eval {

struct ScoreSummary {
  double mean = 0;
  double std_error = 0;  // sample standard deviation over sqrt(n)
  std::size_t n = 0;

  /// Worst-case standard error for scores in [0, 1].
  double bound() const { return 0.5 / std::sqrt(static_cast<double>(n)); }
  bool within_bound() const { return std_error <= bound() + 1e-12; }
};

inline ScoreSummary aggregate(std::span<const double> scores) {
  sparse_frontier::detail::require<InvalidInput>(!scores.empty(), "aggregate needs at least one score");
  ScoreSummary s;
  s.n = scores.size();
  double sum = 0;
  for (double x : scores) {
    sparse_frontier::detail::require<InvalidInput>(std::isfinite(x), "scores must be finite");
    sum += x;
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double x : scores) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.std_error = sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

inline ScoreSummary aggregate(const std::vector<double>& scores) {
  return aggregate(std::span<const double>(scores));
}

struct CurvePoint {
  double sparsity = 0;
  double performance = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Performance against sparsity with distinct knots in [0, 1), kept sorted.
class SparsityCurve {
 public:
  SparsityCurve() = default;
  explicit SparsityCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.sparsity < b.sparsity; });
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double s = points_[i].sparsity;
      sparse_frontier::detail::require<InvalidInput>(std::isfinite(s) && s >= 0 && s < 1,
                                                     "curve sparsities must lie in [0, 1)");
      sparse_frontier::detail::require<InvalidInput>(std::isfinite(points_[i].performance),
                                                     "curve performance must be finite");
      sparse_frontier::detail::require<InvalidInput>(i == 0 || points_[i - 1].sparsity < s,
                                                     "curve sparsities must be distinct");
    }
  }

  const std::vector<CurvePoint>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  double min_sparsity() const { return points_.front().sparsity; }
  double max_sparsity() const { return points_.back().sparsity; }

 private:
  std::vector<CurvePoint> points_;
};

/// Piecewise-linear value; queries outside the knot span are rejected.
inline double interpolate(const SparsityCurve& curve, double query) {
  sparse_frontier::detail::require<InvalidInput>(!curve.empty(), "cannot interpolate an empty curve");
  sparse_frontier::detail::require<InvalidInput>(
      query >= curve.min_sparsity() && query <= curve.max_sparsity(),
      "interpolation query outside the curve's sparsity span");
  const auto& p = curve.points();
  auto hi = std::lower_bound(p.begin(), p.end(), query,
                             [](const CurvePoint& a, double q) { return a.sparsity < q; });
  if (hi->sparsity == query) return hi->performance;
  auto lo = hi - 1;
  const double t = (query - lo->sparsity) / (hi->sparsity - lo->sparsity);
  return lo->performance + t * (hi->performance - lo->performance);
}

/// (dense - sparse) / dense.
inline double relative_error(double dense_mean, double sparse_mean) {
  sparse_frontier::detail::require<InvalidInput>(dense_mean > 0,
                                                 "relative error is undefined for dense mean <= 0");
  return (dense_mean - sparse_mean) / dense_mean;
}

inline double absolute_error(double dense_mean, double sparse_mean) { return dense_mean - sparse_mean; }

}  // namespace sparse_frontier::eval
