// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::cost {

struct ParetoPoint {
  double cost = 0;
  double performance = 0;
  std::string model;
  double sparsity = 0;
  std::string method;  // optional, disambiguates labels

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

/// True when `a` has cost <= and performance >= `b`, one of them strict.
inline bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.cost <= b.cost && a.performance >= b.performance &&
         (a.cost < b.cost || a.performance > b.performance);
}

/// Non-dominated points sorted by cost. Exact duplicates are all kept.
inline std::vector<ParetoPoint> pareto_frontier(std::vector<ParetoPoint> points) {
  sparse_frontier::detail::require<InvalidInput>(!points.empty(), "pareto frontier needs at least one point");
  for (const auto& p : points) {
    sparse_frontier::detail::require<InvalidInput>(std::isfinite(p.cost) && p.cost >= 0,
                                  "pareto cost must be finite and non-negative");
    sparse_frontier::detail::require<InvalidInput>(std::isfinite(p.performance), "pareto performance must be finite");
  }
  std::sort(points.begin(), points.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return std::tie(a.cost, b.performance, a.model, a.sparsity, a.method) <
           std::tie(b.cost, a.performance, b.model, b.sparsity, b.method);
  });
  std::vector<ParetoPoint> frontier;
  for (const auto& p : points) {
    if (frontier.empty() || p.performance > frontier.back().performance ||
        (p.performance == frontier.back().performance && p.cost == frontier.back().cost)) {
      frontier.push_back(p);
    }
  }
  return frontier;
}

}  // namespace sparse_frontier::cost
