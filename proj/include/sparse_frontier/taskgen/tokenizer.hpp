// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cctype>
#include <cstddef>
#include <string_view>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::taskgen {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::size_t count(std::string_view text) const = 0;
};

/// Counts word runs and standalone punctuation, then scales by a factor fitted
/// by least squares to subword token counts of the fixed-length instruction
/// tails (common words, variable tracking, story filtering).
class ApproxTokenizer final : public Tokenizer {
 public:
  static constexpr double kDefaultFactor = 1.14;

  explicit ApproxTokenizer(double factor = kDefaultFactor) : factor_(factor) {
    sparse_frontier::detail::require<InvalidInput>(factor > 0 && std::isfinite(factor),
                                  "tokenizer factor must be positive");
  }

  static std::size_t pieces(std::string_view text) {
    std::size_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
      const bool word = std::isalnum(c) || c == '_' || c >= 0x80;
      if (word) {
        if (!in_word) ++n;
        in_word = true;
      } else {
        in_word = false;
        if (!std::isspace(c)) ++n;
      }
    }
    return n;
  }

  std::size_t count(std::string_view text) const override {
    return static_cast<std::size_t>(std::ceil(factor_ * static_cast<double>(pieces(text))));
  }

  double factor() const noexcept { return factor_; }

 private:
  double factor_;
};

inline const Tokenizer& default_tokenizer() {
  static const ApproxTokenizer tok;
  return tok;
}

}  // namespace sparse_frontier::taskgen
