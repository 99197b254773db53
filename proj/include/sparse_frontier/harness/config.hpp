// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/cost/presets.hpp"
#include "sparse_frontier/harness/plan_demo.hpp"
#include "sparse_frontier/taskgen/sample.hpp"

namespace sparse_frontier::harness {

inline constexpr double kMaxSparsity = 0.95;

struct TaskEntry {
  taskgen::TaskKind kind = taskgen::TaskKind::niah;
  nlohmann::json params = nlohmann::json::object();

  std::string label() const {
    return params.empty() ? std::string(taskgen::to_string(kind))
                          : std::string(taskgen::to_string(kind)) + params.dump();
  }
};

struct MethodEntry {
  std::string method;
  Params params;  // overrides on top of calibration lookups
};

enum class AdapterKind { mock, remote };
enum class MockMode { echo, empty, simulated };

struct ExperimentConfig {
  std::vector<TaskEntry> tasks;
  std::vector<MethodEntry> methods;
  std::vector<double> sparsity_levels;  // 0 selects the dense baseline
  std::vector<std::size_t> seq_lengths;
  std::vector<std::string> models = {"qwen2.5-7b"};
  std::size_t samples_per_config = 100;
  std::uint64_t seed = 0;
  AdapterKind adapter = AdapterKind::mock;
  MockMode mock_mode = MockMode::echo;
  std::size_t max_new_tokens = 512;
  std::size_t max_in_flight = 4;  // execution only, not fingerprinted
  double pareto_batch = 1;        // batch size for decode costs in analysis

  void validate() const {
    using sparse_frontier::detail::require;
    require<ConfigError>(!tasks.empty(), "config needs at least one task");
    require<ConfigError>(!sparsity_levels.empty(), "config needs at least one sparsity level");
    require<ConfigError>(!seq_lengths.empty(), "config needs at least one sequence length");
    require<ConfigError>(!models.empty(), "config needs at least one model");
    require<ConfigError>(samples_per_config >= 1, "samples_per_config must be >= 1");
    require<ConfigError>(max_in_flight >= 1, "max_in_flight must be >= 1");
    require<ConfigError>(pareto_batch > 0, "pareto_batch must be positive");
    for (double s : sparsity_levels)
      require<ConfigError>(s >= 0 && s <= kMaxSparsity,
                           "sparsity levels must lie in [0, 0.95], got " + std::to_string(s));
    const bool any_sparse = std::any_of(sparsity_levels.begin(), sparsity_levels.end(),
                                        [](double s) { return s > 0; });
    require<ConfigError>(!any_sparse || !methods.empty(),
                         "non-zero sparsity levels need at least one method");
    for (const auto& m : methods) {
      check_method(m.method);
      require<ConfigError>(m.method != "dense", "dense runs are selected by sparsity level 0");
    }
    for (std::size_t L : seq_lengths) require<ConfigError>(L > 0, "sequence lengths must be positive");
    for (const auto& name : models) cost::find_preset(name);
  }
};

namespace detail {

inline const char* adapter_name(AdapterKind a) { return a == AdapterKind::mock ? "mock" : "remote"; }

inline const char* mock_name(MockMode m) {
  switch (m) {
    case MockMode::echo:
      return "echo";
    case MockMode::empty:
      return "empty";
    case MockMode::simulated:
      return "simulated";
  }
  return "?";
}

}  // namespace detail

inline AdapterKind parse_adapter(const std::string& s) {
  if (s == "mock") return AdapterKind::mock;
  if (s == "remote") return AdapterKind::remote;
  throw ConfigError("unknown adapter: " + s);
}

inline MockMode parse_mock_mode(const std::string& s) {
  if (s == "echo") return MockMode::echo;
  if (s == "empty") return MockMode::empty;
  if (s == "simulated") return MockMode::simulated;
  throw ConfigError("unknown mock mode: " + s);
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    for (const auto& t : j.at("tasks")) {
      TaskEntry e;
      if (t.is_string()) {
        e.kind = taskgen::parse_task_kind(t.get<std::string>());
      } else {
        e.kind = taskgen::parse_task_kind(t.at("kind").get<std::string>());
        e.params = t.value("params", nlohmann::json::object());
      }
      c.tasks.push_back(std::move(e));
    }
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) {
        MethodEntry e;
        if (m.is_string()) {
          e.method = m.get<std::string>();
        } else {
          e.method = m.at("method").get<std::string>();
          e.params = m.value("params", Params{});
        }
        c.methods.push_back(std::move(e));
      }
    }
    c.sparsity_levels = j.at("sparsity_levels").get<std::vector<double>>();
    c.seq_lengths = j.at("seq_lengths").get<std::vector<std::size_t>>();
    if (j.contains("models")) c.models = j.at("models").get<std::vector<std::string>>();
    if (j.contains("model")) c.models = {j.at("model").get<std::string>()};
    c.samples_per_config = j.value("samples_per_config", c.samples_per_config);
    c.seed = j.value("seed", c.seed);
    if (j.contains("adapter")) c.adapter = parse_adapter(j.at("adapter").get<std::string>());
    if (j.contains("mock_mode")) c.mock_mode = parse_mock_mode(j.at("mock_mode").get<std::string>());
    c.max_new_tokens = j.value("max_new_tokens", c.max_new_tokens);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.pareto_batch = j.value("pareto_batch", c.pareto_batch);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  sparse_frontier::detail::require<ConfigError>(in.good(), "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

/// Set-like lists sorted and deduplicated; execution-only fields omitted.
inline nlohmann::json canonical_json(const ExperimentConfig& c) {
  std::vector<std::string> tasks;
  for (const auto& t : c.tasks) tasks.push_back(t.label());
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  std::vector<std::string> methods;
  for (const auto& m : c.methods) methods.push_back(m.method + nlohmann::json(m.params).dump());
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  auto levels = c.sparsity_levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto lengths = c.seq_lengths;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  auto models = c.models;
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  return {{"tasks", tasks},
          {"methods", methods},
          {"sparsity_levels", levels},
          {"seq_lengths", lengths},
          {"models", models},
          {"samples_per_config", c.samples_per_config},
          {"seed", c.seed},
          {"adapter", detail::adapter_name(c.adapter)},
          {"mock_mode", c.adapter == AdapterKind::mock ? detail::mock_name(c.mock_mode) : ""},
          {"max_new_tokens", c.max_new_tokens}};
}

/// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
inline std::string fingerprint(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(c).dump())));
  return buf;
}

}  // namespace sparse_frontier::harness
