// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sparse_frontier {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input tensors or arguments violate a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A mask or plan cannot be executed (e.g. a query row with no keys).
class RejectedPlan : public Error {
 public:
  using Error::Error;
};

/// The requested budget cannot be realised for the given sequence.
class InfeasibleBudget : public Error {
 public:
  using Error::Error;
};

/// A task generator could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Configuration files or CLI flags are malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A model adapter failed to produce a response.
class AdapterError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename E>
inline void require(bool condition, const std::string& message) {
  if (!condition) throw E(message);
}

}  // namespace detail
}  // namespace sparse_frontier
