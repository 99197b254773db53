// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier {

/// Dense row-major rank-3 tensor of doubles, laid out as [head][row][col].
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t heads, std::size_t rows, std::size_t cols, double fill = 0.0)
      : heads_(heads), rows_(rows), cols_(cols), data_(heads * rows * cols, fill) {}

  std::size_t heads() const noexcept { return heads_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t h, std::size_t r, std::size_t c) noexcept {
    return data_[(h * rows_ + r) * cols_ + c];
  }
  double operator()(std::size_t h, std::size_t r, std::size_t c) const noexcept {
    return data_[(h * rows_ + r) * cols_ + c];
  }

  std::span<double> row(std::size_t h, std::size_t r) noexcept {
    return {data_.data() + (h * rows_ + r) * cols_, cols_};
  }
  std::span<const double> row(std::size_t h, std::size_t r) const noexcept {
    return {data_.data() + (h * rows_ + r) * cols_, cols_};
  }

  std::span<const double> flat() const noexcept { return data_; }
  std::span<double> flat() noexcept { return data_; }

  bool all_finite() const noexcept {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t heads_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace sparse_frontier
