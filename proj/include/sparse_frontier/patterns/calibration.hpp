// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Operating points (method, sequence length, target sparsity) -> parameters,
// and calibrators that search a budget against exact plan sparsity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/patterns/sparsity.hpp"
#include "sparse_frontier/patterns/vertical_slash.hpp"

namespace sparse_frontier {

/// The ten evaluated sparsity levels, densest budget last.
inline const std::vector<double>& standard_sparsity_levels() {
  static const std::vector<double> levels = {
      1.0 - 1.0 / 20.0, 1.0 - 1.0 / 15.0, 0.9, 1.0 - 1.0 / 7.5, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3};
  return levels;
}

struct CalibrationPoint {
  double target_sparsity = 0.0;
  std::map<std::string, double> params;
  bool verified = true;  // false when the level alignment is inferred

  friend bool operator==(const CalibrationPoint&, const CalibrationPoint&) = default;
};

struct CalibrationRow {
  std::string method;
  std::size_t seq_len = 0;
  std::vector<CalibrationPoint> points;

  friend bool operator==(const CalibrationRow&, const CalibrationRow&) = default;
};

class CalibrationTable {
 public:
  CalibrationTable() = default;
  explicit CalibrationTable(std::vector<CalibrationRow> rows) : rows_(std::move(rows)) {}

  const std::vector<CalibrationRow>& rows() const noexcept { return rows_; }

  const CalibrationRow* find(const std::string& method, std::size_t seq_len) const {
    for (const auto& r : rows_)
      if (r.method == method && r.seq_len == seq_len) return &r;
    return nullptr;
  }

  /// Parameters for a level, matched to within 1e-3.
  std::optional<CalibrationPoint> lookup(const std::string& method, std::size_t seq_len,
                                         double target_sparsity) const {
    const auto* row = find(method, seq_len);
    if (!row) return std::nullopt;
    for (const auto& p : row->points)
      if (std::abs(p.target_sparsity - target_sparsity) < 1e-3) return p;
    return std::nullopt;
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : r.points) {
        pts.push_back({{"target_sparsity", p.target_sparsity},
                       {"params", p.params},
                       {"verified", p.verified}});
      }
      rows.push_back({{"method", r.method}, {"seq_len", r.seq_len}, {"points", pts}});
    }
    return {{"rows", rows}};
  }

  static CalibrationTable from_json(const nlohmann::json& j) {
    std::vector<CalibrationRow> rows;
    try {
      for (const auto& r : j.at("rows")) {
        CalibrationRow row;
        row.method = r.at("method").get<std::string>();
        row.seq_len = r.at("seq_len").get<std::size_t>();
        for (const auto& p : r.at("points")) {
          CalibrationPoint pt;
          pt.target_sparsity = p.at("target_sparsity").get<double>();
          pt.params = p.at("params").get<std::map<std::string, double>>();
          pt.verified = p.value("verified", true);
          row.points.push_back(std::move(pt));
        }
        rows.push_back(std::move(row));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed calibration table: ") + e.what());
    }
    return CalibrationTable(std::move(rows));
  }

  static CalibrationTable load(const std::string& path) {
    std::ifstream in(path);
    detail::require<ConfigError>(in.good(), "cannot open calibration file " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("calibration file " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
  }

 private:
  std::vector<CalibrationRow> rows_;
};

namespace detail {

inline CalibrationRow make_row(const std::string& method, std::size_t seq_len,
                               const std::vector<double>& levels,
                               const std::vector<std::map<std::string, double>>& params,
                               bool verified) {
  CalibrationRow row{method, seq_len, {}};
  for (std::size_t i = 0; i < params.size(); ++i)
    row.points.push_back({levels[i], params[i], verified});
  return row;
}

inline std::vector<std::map<std::string, double>> single_param(const std::string& name,
                                                               const std::vector<double>& v) {
  std::vector<std::map<std::string, double>> out;
  for (double x : v) out.push_back({{name, x}});
  return out;
}

}  // namespace detail

/// Published operating points for the six methods. Block-Sparse lists seven
/// values for ten levels; they are aligned to the levels their exact block
/// sparsity lands on and flagged unverified.
inline const CalibrationTable& builtin_calibration() {
  static const CalibrationTable table = [] {
    const auto& L = standard_sparsity_levels();
    using detail::make_row;
    using detail::single_param;
    std::vector<CalibrationRow> rows;

    const std::map<std::size_t, std::vector<double>> vs = {
        {16384, {164, 240, 315, 400, 448, 576, 768, 1024, 1536, 2304}},
        {32768, {290, 384, 448, 576, 704, 1024, 1536, 2304, 3584, 4608}},
        {65536, {400, 448, 544, 640, 960, 1280, 2304, 4096, 6144, 8192}},
        {128000, {480, 768, 1024, 1536, 2048, 3584, 5632, 10240, 13312, 18432}}};
    for (const auto& [n, values] : vs) {
      std::vector<std::map<std::string, double>> params;
      for (double v : values) params.push_back({{"k_v", v}, {"k_s", v}});
      rows.push_back(make_row("vertical_slash", n, L, params, true));
    }

    const std::map<std::size_t, std::vector<std::pair<double, double>>> flex = {
        {16384, {{0, 164}, {0, 240}, {0, 315}, {0, 400}, {0.55, 512}, {0.71, 512}, {0.88, 512}}},
        {32768, {{0, 290}, {0, 384}, {0.45, 512}, {0.6, 512}, {0.7, 512}, {0.8, 512}, {0.92, 512}}},
        {65536,
         {{0, 400}, {0.45, 512}, {0.55, 512}, {0.7, 512}, {0.77, 512}, {0.85, 512}, {0.94, 512}}}};
    for (const auto& [n, values] : flex) {
      std::vector<std::map<std::string, double>> params;
      for (auto [alpha, budget] : values) params.push_back({{"alpha", alpha}, {"min_budget", budget}});
      rows.push_back(make_row("flexprefill", n, L, params, true));
    }

    const std::vector<double> block_levels = {L[0], L[1], L[2], L[3], L[4], L[5], L[7]};
    const std::map<std::size_t, std::vector<double>> block = {
        {16384, {26, 35, 53, 71, 108, 188, 300}},
        {32768, {52, 69, 105, 141, 216, 376, 600}},
        {65536, {104, 139, 210, 283, 432, 752, 1200}}};
    for (const auto& [n, values] : block)
      rows.push_back(make_row("block_sparse", n, block_levels, single_param("top_k_blocks", values),
                              false));

    const std::map<std::size_t, std::vector<double>> capacity = {
        {16384, {819, 1092, 1638, 2183, 3276, 4915, 6553, 8192, 9830, 11468}},
        {32768, {1638, 2185, 3276, 4367, 6553, 9830, 13107, 16384, 19660, 22937}},
        {65536, {3276, 4371, 6553, 8735, 13107, 19660, 26214, 32768, 39321, 45875}}};
    for (const auto& [n, values] : capacity) {
      rows.push_back(make_row("snapkv", n, L, single_param("token_capacity", values), true));
      rows.push_back(make_row("ada_snapkv", n, L, single_param("token_capacity", values), true));
    }

    const std::map<std::size_t, std::vector<double>> quest = {
        {16384, {816, 1088, 1632, 2176, 3280, 4912, 6560, 8192, 9824, 11472}},
        {32768, {1632, 2192, 3280, 4368, 6560, 9824, 13104, 16384, 19664, 22944}},
        {65536, {3280, 4368, 6560, 8736, 13104, 19664, 26208, 32768, 39328, 45872}},
        {128000, {6400, 8544, 12800, 17056, 25600, 38400, 51200, 64000, 76800, 89600}}};
    for (const auto& [n, values] : quest)
      rows.push_back(make_row("quest", n, L, single_param("token_budget", values), true));
    return CalibrationTable(std::move(rows));
  }();
  return table;
}

struct VerticalSlashCalibration {
  std::size_t k = 0;  // k_v = k_s
  double achieved_sparsity = 0.0;
  bool floor_limited = false;
};

/// Smallest equal k_v = k_s whose plan sparsity is <= target. Rankings do not
/// depend on k, so the window scores are computed once.
inline VerticalSlashCalibration calibrate_vertical_slash(const AttentionInputs& inputs,
                                                         double target_sparsity,
                                                         const VerticalSlashOptions& opt = {}) {
  detail::require<InvalidInput>(target_sparsity >= 0.0 && target_sparsity < 1.0,
                                "target sparsity must lie in [0, 1)");
  const std::size_t n = inputs.seq_len();
  const std::size_t lo0 = std::max(opt.forced_prefix, opt.forced_local);
  detail::require<InfeasibleBudget>(lo0 <= n, "forced units exceed sequence length");
  const auto scores = vertical_slash_scores(inputs, opt);
  auto sparsity_at = [&](std::size_t k) {
    return plan_sparsity(vertical_slash_from_scores(scores, n, opt, k, k)).achieved_sparsity;
  };
  std::size_t lo = lo0;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (sparsity_at(mid) <= target_sparsity) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  VerticalSlashCalibration out;
  out.k = lo;
  out.achieved_sparsity = sparsity_at(lo);
  out.floor_limited = lo == lo0 && out.achieved_sparsity < target_sparsity;
  return out;
}

}  // namespace sparse_frontier
