// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>

#include "sparse_frontier/core/errors.hpp"
#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/eval/score.hpp"
#include "sparse_frontier/harness/config.hpp"
#include "sparse_frontier/taskgen/sample.hpp"

namespace sparse_frontier::harness {

struct GenerationRequest {
  std::string prompt;
  std::size_t max_new_tokens = 512;
  // Plan-injection context. Remote adapters ignore these fields.
  const taskgen::TaskSample* sample = nullptr;
  std::string method = "dense";
  double sparsity = 0;
  Params params;
};

class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
  virtual bool supports_plan_injection() const = 0;
  virtual std::string name() const = 0;
};

/// Deterministic responder. `echo` answers with the gold, `empty` with nothing,
/// `simulated` answers correctly with a probability that falls with sparsity.
class MockAdapter : public ModelAdapter {
 public:
  explicit MockAdapter(MockMode mode = MockMode::echo, std::uint64_t seed = 0)
      : mode_(mode), seed_(seed) {}

  std::string generate(const GenerationRequest& r) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    switch (mode_) {
      case MockMode::empty:
        return "";
      case MockMode::echo:
        return eval::format_gold_answer(require_sample(r));
      case MockMode::simulated: {
        const auto& s = require_sample(r);
        const std::uint64_t h =
            derive_seed(seed_, fnv1a64(r.prompt), fnv1a64(r.method),
                        static_cast<std::uint64_t>(std::llround(r.sparsity * 1e6)));
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u < accuracy(r.method, r.sparsity)) return eval::format_gold_answer(s);
        return "<explanation>\nNot found.\n</explanation>\n<answer>\nunknown\n</answer>";
      }
    }
    return "";
  }

  bool supports_plan_injection() const override { return true; }
  std::string name() const override { return "mock"; }

  std::size_t calls() const { return calls_.load(); }
  MockMode mode() const { return mode_; }

  /// Probability of a correct answer in simulated mode.
  static double accuracy(const std::string& method, double sparsity) {
    double penalty = 0.6;
    if (method == "vertical_slash" || method == "flexprefill") penalty = 0.3;
    if (method == "quest") penalty = 0.2;
    if (method == "snapkv" || method == "ada_snapkv") penalty = 0.8;
    return 0.9 * (1.0 - penalty * sparsity * sparsity);
  }

 private:
  static const taskgen::TaskSample& require_sample(const GenerationRequest& r) {
    if (r.sample == nullptr) throw AdapterError("mock adapter needs the sample to answer");
    return *r.sample;
  }

  MockMode mode_;
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace sparse_frontier::harness
