// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Runs a small suite against the simulated mock adapter and prints the
// cross-task aggregate.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "sparse_frontier/harness/adapter.hpp"
#include "sparse_frontier/harness/analyze.hpp"
#include "sparse_frontier/harness/runner.hpp"

namespace h = sparse_frontier::harness;

int main(int argc, char** argv) {
  const std::string config_path = argc > 1 ? argv[1] : "demo/configs/mock_suite.json";
  const auto config = h::load_config(config_path);
  const auto dir = std::filesystem::temp_directory_path() / "sflab_demo";
  std::filesystem::create_directories(dir);
  const std::string results = (dir / (h::fingerprint(config) + ".jsonl")).string();

  h::MockAdapter adapter(config.mock_mode, config.seed);
  const auto stats = h::run_suite(config, adapter, results);
  std::printf("%zu planned, %zu skipped, %zu completed, %zu failed\n", stats.planned, stats.skipped,
              stats.completed, stats.failed);
  h::analyze(h::read_records(results)).aggregate.write(std::cout);
}
