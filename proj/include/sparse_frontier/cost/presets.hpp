// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Named model dimensions. Layer and head counts follow the evaluated model
// list; hidden, MLP, head and vocabulary sizes come from public model configs.

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/cost/spec.hpp"

namespace sparse_frontier::cost {

struct ModelDims {
  std::string name;
  std::string family;
  double d = 0;
  double h = 0;
  double d_h = 0;
  double n_kv = 0;
  std::size_t layers = 0;
  double d_mlp = 0;
  double V = 0;
  double sliding_window = 0;  // 0 when every layer is dense
  std::size_t global_every = 0;

  std::vector<LayerSpec> layer_kinds() const {
    if (sliding_window <= 0 || global_every == 0) return all_dense(layers);
    return interleaved_sliding(layers, global_every, sliding_window);
  }

  CostSpec spec(double L, double B = 1, double rho = 1) const {
    CostSpec s;
    s.L = L;
    s.d = d;
    s.h = h;
    s.d_h = d_h;
    s.n_kv = n_kv;
    s.d_mlp = d_mlp;
    s.V = V;
    s.B = B;
    s.rho = rho;
    s.layer_kinds = layer_kinds();
    return s;
  }

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

inline void to_json(nlohmann::json& j, const ModelDims& m) {
  j = {{"name", m.name},   {"family", m.family}, {"d", m.d},
       {"h", m.h},         {"d_h", m.d_h},       {"n_kv", m.n_kv},
       {"layers", m.layers}, {"d_mlp", m.d_mlp}, {"V", m.V},
       {"sliding_window", m.sliding_window}, {"global_every", m.global_every}};
}

inline void from_json(const nlohmann::json& j, ModelDims& m) {
  j.at("name").get_to(m.name);
  j.at("family").get_to(m.family);
  j.at("d").get_to(m.d);
  j.at("h").get_to(m.h);
  j.at("d_h").get_to(m.d_h);
  j.at("n_kv").get_to(m.n_kv);
  j.at("layers").get_to(m.layers);
  j.at("d_mlp").get_to(m.d_mlp);
  j.at("V").get_to(m.V);
  m.sliding_window = j.value("sliding_window", 0.0);
  m.global_every = j.value("global_every", std::size_t{0});
}

inline const std::vector<ModelDims>& builtin_presets() {
  static const std::vector<ModelDims> presets = {
      {"llama3.1-8b", "llama3.1", 4096, 32, 128, 8, 32, 14336, 128256, 0, 0},
      {"llama3.1-70b", "llama3.1", 8192, 64, 128, 8, 80, 28672, 128256, 0, 0},
      {"qwen2.5-7b", "qwen2.5", 3584, 28, 128, 4, 28, 18944, 152064, 0, 0},
      {"qwen2.5-14b", "qwen2.5", 5120, 40, 128, 8, 48, 13824, 152064, 0, 0},
      {"qwen2.5-32b", "qwen2.5", 5120, 40, 128, 8, 64, 27648, 152064, 0, 0},
      {"qwen2.5-72b", "qwen2.5", 8192, 64, 128, 8, 80, 29568, 152064, 0, 0},
      {"gemma3-4b", "gemma3", 2560, 8, 256, 4, 34, 10240, 262208, 1024, 6},
      {"gemma3-12b", "gemma3", 3840, 16, 256, 8, 48, 15360, 262208, 1024, 6},
      {"gemma3-27b", "gemma3", 5376, 32, 128, 16, 62, 21504, 262208, 1024, 6},
  };
  return presets;
}

inline std::vector<ModelDims> load_presets(const std::string& path) {
  std::ifstream in(path);
  sparse_frontier::detail::require<ConfigError>(in.good(), "cannot open model preset file " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j.at("models").get<std::vector<ModelDims>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed model preset file " + path + ": " + e.what());
  }
}

inline const ModelDims& find_preset(const std::string& name,
                                    const std::vector<ModelDims>& presets = builtin_presets()) {
  for (const auto& m : presets)
    if (m.name == name) return m;
  throw ConfigError("unknown model preset: " + name);
}

inline std::vector<ModelDims> family_presets(
    const std::string& family, const std::vector<ModelDims>& presets = builtin_presets()) {
  std::vector<ModelDims> out;
  for (const auto& m : presets)
    if (m.family == family) out.push_back(m);
  sparse_frontier::detail::require<ConfigError>(!out.empty(), "unknown model family: " + family);
  return out;
}

}  // namespace sparse_frontier::cost
