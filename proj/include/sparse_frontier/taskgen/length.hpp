// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "sparse_frontier/taskgen/prompt.hpp"
#include "sparse_frontier/taskgen/tokenizer.hpp"

namespace sparse_frontier::taskgen {

inline constexpr double kMinLengthFraction = 0.95;

inline std::size_t prompt_tokens(const TaskSample& s, const Tokenizer& tok) {
  return tok.count(render_prompt(s));
}

namespace detail {

/// Largest unit count in [min_units, max_units] whose rendered prompt fits in
/// `target` tokens. Assumes length grows with the unit count.
template <typename Build>
TaskSample fit_units(std::size_t target, std::size_t min_units, std::size_t max_units, Build&& build,
                     const Tokenizer& tok, std::size_t* units_out = nullptr) {
  auto fits = [&](std::size_t units, TaskSample* out) {
    TaskSample s = build(units);
    const bool ok = prompt_tokens(s, tok) <= target;
    if (ok && out) *out = std::move(s);
    return ok;
  };
  TaskSample best;
  sparse_frontier::detail::require<GenerationError>(fits(min_units, &best),
                                   "target of " + std::to_string(target) +
                                       " tokens is too small for the minimal task");
  std::size_t lo = min_units;  // fits
  std::size_t hi = lo;         // first candidate that may not fit
  std::size_t step = 1;
  while (true) {
    hi = lo + step > max_units ? max_units : lo + step;
    if (hi == lo) break;
    TaskSample s;
    if (!fits(hi, &s)) break;
    lo = hi;
    best = std::move(s);
    step *= 2;
  }
  if (hi > lo) {
    std::size_t bad = hi;
    while (bad - lo > 1) {
      const std::size_t mid = lo + (bad - lo) / 2;
      TaskSample s;
      if (fits(mid, &s)) {
        lo = mid;
        best = std::move(s);
      } else {
        bad = mid;
      }
    }
  }
  if (units_out) *units_out = lo;
  return best;
}

}  // namespace detail

/// fit_units, then requires the prompt to reach 95% of `target`.
template <typename Build>
TaskSample fit_to_length(std::size_t target, std::size_t min_units, std::size_t max_units,
                         Build&& build, const Tokenizer& tok) {
  std::size_t units = 0;
  TaskSample best = detail::fit_units(target, min_units, max_units, std::forward<Build>(build), tok, &units);
  const std::size_t tokens = prompt_tokens(best, tok);
  sparse_frontier::detail::require<GenerationError>(
      static_cast<double>(tokens) >= kMinLengthFraction * static_cast<double>(target),
      "could not reach " + std::to_string(target) + " tokens (got " + std::to_string(tokens) +
          " with " + std::to_string(units) + " units)");
  best.target_tokens = target;
  return best;
}

}  // namespace sparse_frontier::taskgen
