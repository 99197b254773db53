// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/attention/synthetic.hpp"
#include "sparse_frontier/patterns/block_sparse.hpp"
#include "sparse_frontier/patterns/calibration.hpp"
#include "sparse_frontier/patterns/eviction.hpp"
#include "sparse_frontier/patterns/quest.hpp"
#include "sparse_frontier/patterns/sparsity.hpp"
#include "sparse_frontier/patterns/vertical_slash.hpp"

namespace sf = sparse_frontier;

namespace {

sf::AttentionInputs inputs(std::size_t n, std::uint64_t seed = 1, const char* gen = "clustered",
                           std::size_t hq = 4, std::size_t hkv = 2) {
  sf::SyntheticSpec spec;
  spec.generator = gen;
  spec.seq_len = n;
  spec.seed = seed;
  spec.num_q_heads = hq;
  spec.num_kv_heads = hkv;
  spec.head_dim = 8;
  return sf::make_synthetic_inputs(spec);
}

sf::VerticalSlashOptions small_vs() { return {64, 4, 16}; }
sf::EvictionOptions small_eviction() { return {32, 5, 4, 16}; }

// Direct cell count of a mask, restricted to the causal triangle.
std::size_t causal_cells(const sf::CellMask& m) {
  std::size_t c = 0;
  for (const auto& head : m.rows)
    for (std::size_t i = 0; i < head.size(); ++i)
      for (auto j : head[i]) c += j <= i ? 1 : 0;
  return c;
}

// Recall straight from dense weights.
double recall_from_weights(const sf::CellMask& m, const sf::AttentionInputs& in) {
  const auto w = sf::dense_prefill(in, {true}).weights.value();
  const std::size_t n = in.seq_len();
  double total = 0;
  for (std::size_t h = 0; h < m.rows.size(); ++h)
    for (std::size_t i = 0; i < n; ++i)
      for (auto j : m.rows[h][i]) total += w[h * n + i].probs[j];
  return total / static_cast<double>(m.rows.size() * n);
}

}  // namespace

TEST(VerticalSlash, ReportedCellsMatchMaskCount) {
  const auto in = inputs(200);
  for (std::size_t k : {16, 40, 100, 200}) {
    const sf::SparsePlan plan = sf::build_vertical_slash(in, std::max<std::size_t>(k, 4), k, small_vs());
    const auto r = sf::plan_sparsity(plan);
    EXPECT_EQ(r.computed_cells, causal_cells(sf::to_cell_mask(plan))) << k;
    EXPECT_EQ(r.causal_cells, 4u * 200 * 201 / 2);
  }
}

TEST(VerticalSlash, KeepsForcedUnitsAndHonoursCounts) {
  const auto in = inputs(128);
  const auto plan = sf::build_vertical_slash(in, 10, 20, small_vs());
  for (const auto& head : plan.heads) {
    ASSERT_EQ(head.verticals.size(), 10u);
    ASSERT_EQ(head.slashes.size(), 20u);
    for (sf::KeyIndex j = 0; j < 4; ++j) EXPECT_EQ(head.verticals[j], j);
    for (sf::KeyIndex o = 0; o < 16; ++o) EXPECT_EQ(head.slashes[o], o);
  }
  EXPECT_THROW(sf::build_vertical_slash(in, 2, 20, small_vs()), sf::InvalidInput);
  EXPECT_THROW(sf::build_vertical_slash(in, 10, 8, small_vs()), sf::InvalidInput);
  EXPECT_THROW(sf::build_vertical_slash(in, 10, 129, small_vs()), sf::InfeasibleBudget);
}

TEST(VerticalSlash, FullBudgetIsDense) {
  const auto in = inputs(64);
  const sf::SparsePlan plan = sf::build_vertical_slash(in, 64, 64, {64, 4, 16});
  EXPECT_DOUBLE_EQ(sf::plan_sparsity(plan).achieved_sparsity, 0.0);
  EXPECT_NEAR(sf::attention_recall(plan, in), 1.0, 1e-12);
}

TEST(VerticalSlash, RecallAgreesWithDenseWeights) {
  const auto in = inputs(96, 3);
  const sf::SparsePlan plan = sf::build_vertical_slash(in, 12, 24, {48, 4, 16});
  EXPECT_NEAR(sf::attention_recall(plan, in), recall_from_weights(sf::to_cell_mask(plan), in), 1e-12);
}

TEST(VerticalSlash, CalibrationFindsSmallestCount) {
  const auto in = inputs(256, 2);
  const auto c = sf::calibrate_vertical_slash(in, 0.8, small_vs());
  EXPECT_LE(c.achieved_sparsity, 0.8);
  const auto tighter = sf::plan_sparsity(sf::build_vertical_slash(in, c.k - 1, c.k - 1, small_vs()));
  EXPECT_GT(tighter.achieved_sparsity, 0.8);
}

TEST(FlexPrefill, ZeroAlphaEqualsVerticalSlash) {
  const auto in = inputs(160, 4);
  sf::FlexPrefillConfig cfg;
  cfg.alpha = 0;
  cfg.min_budget = 30;
  cfg.approx_window = 64;
  cfg.forced_local = 16;
  EXPECT_EQ(sf::build_flexprefill(in, cfg), sf::build_vertical_slash(in, 30, 30, small_vs()));
}

TEST(FlexPrefill, BudgetGrowsWithAlphaAndRespectsFloor) {
  const auto in = inputs(160, 4);
  sf::FlexPrefillConfig cfg;
  cfg.min_budget = 20;
  cfg.approx_window = 64;
  cfg.forced_local = 16;
  std::size_t prev = 0;
  for (double a : {0.1, 0.5, 0.9, 0.99, 1.0}) {
    cfg.alpha = a;
    const auto plan = sf::build_flexprefill(in, cfg);
    const std::size_t cells = sf::plan_sparsity(plan).computed_cells;
    EXPECT_GE(cells, prev) << a;
    prev = cells;
    for (const auto& h : plan.heads) {
      EXPECT_GE(h.verticals.size(), 20u);
      EXPECT_GE(h.slashes.size(), 20u);
    }
  }
  EXPECT_DOUBLE_EQ(sf::plan_sparsity(sf::build_flexprefill(in, cfg)).achieved_sparsity, 0.0);
  cfg.alpha = 1.5;
  EXPECT_THROW(sf::build_flexprefill(in, cfg), sf::InvalidInput);
}

TEST(BlockSparse, SparsityDependsOnlyOnLengthAndBudget) {
  for (std::uint64_t seed : {1, 2}) {
    const auto in = inputs(200, seed, "uniform");
    for (std::size_t k : {2, 3, 5, 13}) {
      const sf::SparsePlan plan = sf::build_block_sparse(in, k, 16);
      const auto r = sf::plan_sparsity(plan);
      EXPECT_EQ(r.computed_cells, causal_cells(sf::to_cell_mask(plan)));
      EXPECT_NEAR(r.achieved_sparsity, sf::block_sparsity_for_k(200, k, 16), 1e-15);
    }
  }
}

TEST(BlockSparse, AlwaysKeepsSinkAndDiagonalBlocks) {
  const auto plan = sf::build_block_sparse(inputs(128), 3, 16);
  for (const auto& head : plan.selections)
    for (std::size_t b = 0; b < head.size(); ++b) {
      EXPECT_EQ(head[b].front(), 0u);
      EXPECT_EQ(head[b].back(), b);
      EXPECT_EQ(head[b].size(), std::min<std::size_t>(b + 1, 3));
    }
  EXPECT_TRUE(sf::build_block_sparse(inputs(64), 9, 16).clamped);
  EXPECT_THROW(sf::build_block_sparse(inputs(64), 1, 16), sf::InvalidInput);
}

TEST(BlockSparse, CalibrationIsTheSmallestSufficientBudget) {
  const auto c = sf::calibrate_block_topk(16384, 0.9);
  EXPECT_LE(c.achieved_sparsity, 0.9);
  EXPECT_GT(sf::block_sparsity_for_k(16384, c.top_k - 1), 0.9);
}

TEST(SnapKV, KeepsCapacityTokensIncludingForced) {
  const auto in = inputs(200);
  const auto plan = sf::snapkv_compress(in, 50, small_eviction());
  ASSERT_EQ(plan.kept.size(), 2u);
  for (const auto& k : plan.kept) {
    EXPECT_EQ(k.size(), 50u);
    for (sf::KeyIndex j = 0; j < 4; ++j) EXPECT_TRUE(std::binary_search(k.begin(), k.end(), j));
    for (sf::KeyIndex j = 184; j < 200; ++j) EXPECT_TRUE(std::binary_search(k.begin(), k.end(), j));
  }
  EXPECT_NEAR(sf::plan_sparsity(plan).achieved_sparsity, 1.0 - 50.0 / 200.0, 1e-15);
  EXPECT_THROW(sf::snapkv_compress(in, 10, small_eviction()), sf::InvalidInput);
}

TEST(SnapKV, CapacityAboveLengthIsNoOp) {
  const auto in = inputs(64);
  const auto plan = sf::snapkv_compress(in, 64, small_eviction());
  EXPECT_TRUE(plan.no_op);
  EXPECT_DOUBLE_EQ(sf::plan_sparsity(plan).achieved_sparsity, 0.0);
  EXPECT_NEAR(sf::attention_recall(plan, in), 1.0, 1e-12);
}

TEST(AdaSnapKV, FullFloorMatchesUniformCounts) {
  const auto in = inputs(200, 5, "clustered", 8, 4);
  const auto uniform = sf::snapkv_compress(in, 40, small_eviction());
  const auto ada = sf::ada_snapkv_compress(in, 40, 1.0, small_eviction());
  for (std::size_t g = 0; g < 4; ++g) EXPECT_EQ(ada.kept[g].size(), uniform.kept[g].size());
}

TEST(AdaSnapKV, PoolIsConservedAndFloorRespected) {
  const auto in = inputs(200, 6, "clustered", 8, 4);
  const auto ada = sf::ada_snapkv_compress(in, 40, 0.5, small_eviction());
  EXPECT_EQ(ada.total_kept(), 4u * 40);
  for (const auto& k : ada.kept) EXPECT_GE(k.size(), 20u);
  EXPECT_THROW(sf::ada_snapkv_compress(in, 40, 1.5, small_eviction()), sf::InvalidInput);
}

TEST(Quest, FullBudgetIsDenseWithFullRecall) {
  const auto in = inputs(256);
  const sf::SparsePlan plan = sf::build_quest(in, 256, 16);
  EXPECT_DOUBLE_EQ(sf::plan_sparsity(plan).achieved_sparsity, 0.0);
  EXPECT_NEAR(sf::attention_recall(plan, in), 1.0, 1e-12);
}

TEST(Quest, PageScoreUpperBoundsEveryKeyInThePage) {
  const auto in = inputs(256, 9, "uniform");
  const auto reps = sf::quest_index(in, 16);
  for (std::size_t h = 0; h < in.num_q_heads(); ++h) {
    const auto q = in.queries.row(h, 255);
    const auto& r = reps[in.group_map[h]];
    for (std::size_t j = 0; j < 256; ++j)
      EXPECT_GE(sf::quest_page_score(q, r, j / 16) + 1e-12, sf::dot(q, in.keys.row(in.group_map[h], j)));
  }
}

TEST(Quest, KeepsCurrentPageAndBudget) {
  const auto in = inputs(256, 2);
  const auto plan = sf::build_quest(in, 64, 16, 200);
  for (const auto& pages : plan.selected_pages) {
    EXPECT_EQ(pages.size(), 4u);
    EXPECT_TRUE(std::binary_search(pages.begin(), pages.end(), 200u / 16));
  }
  EXPECT_THROW(sf::build_quest(in, 8, 16), sf::InvalidInput);
}

TEST(Sparsity, PrefillAndDecodeRowsAreExclusive) {
  const auto in = inputs(64);
  const sf::SparsePlan quest = sf::build_quest(in, 32, 16);
  const sf::SparsePlan blocks = sf::build_block_sparse(in, 2, 16);
  EXPECT_TRUE(sf::is_decode_plan(quest));
  EXPECT_FALSE(sf::is_decode_plan(blocks));
  EXPECT_THROW(sf::to_cell_mask(quest), sf::InvalidInput);
  EXPECT_THROW(sf::decode_rows(blocks, in.group_map), sf::InvalidInput);
  EXPECT_THROW(sf::attention_recall(blocks, in, 32), sf::InvalidInput);
}

TEST(Sparsity, OutputErrorVanishesForDensePlans) {
  const auto in = inputs(64);
  const auto err = sf::plan_output_error(sf::build_vertical_slash(in, 64, 64, {64, 4, 16}), in);
  EXPECT_LT(err.max_abs, 1e-12);
  EXPECT_GT(sf::plan_output_error(sf::build_block_sparse(in, 2, 16), in).max_abs, 0.0);
}

TEST(Calibration, StandardLevelsAreTheTenBudgets) {
  const auto& L = sf::standard_sparsity_levels();
  ASSERT_EQ(L.size(), 10u);
  const double budgets[] = {20, 15, 10, 7.5, 5, 1 / 0.3, 2.5, 2, 1 / 0.6, 1 / 0.7};
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(L[i], 1.0 - 1.0 / budgets[i], 1e-12);
}

TEST(Calibration, LookupAndRoundTrip) {
  const auto& t = sf::builtin_calibration();
  const auto p = t.lookup("vertical_slash", 16384, 0.9);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->params.at("k_v"), 315);
  EXPECT_FALSE(t.lookup("vertical_slash", 16384, 0.91));
  EXPECT_FALSE(t.lookup("quest", 1000, 0.9));
  EXPECT_EQ(sf::CalibrationTable::from_json(t.to_json()).rows(), t.rows());
  EXPECT_THROW(sf::CalibrationTable::from_json({{"rows", 3}}), sf::ConfigError);
}

TEST(Calibration, ShippedFileEqualsBuiltin) {
  const auto loaded = sf::CalibrationTable::load(std::string(SFLAB_SOURCE_DIR) + "/data/calibration.json");
  EXPECT_EQ(loaded.rows(), sf::builtin_calibration().rows());
  EXPECT_THROW(sf::CalibrationTable::load("/nonexistent/calibration.json"), sf::ConfigError);
}

TEST(Calibration, BlockSparseAlignmentLandsNearItsLevels) {
  for (const auto& row : sf::builtin_calibration().rows()) {
    if (row.method != "block_sparse") continue;
    for (const auto& p : row.points) {
      EXPECT_FALSE(p.verified);
      const double s = sf::block_sparsity_for_k(row.seq_len, static_cast<std::size_t>(p.params.at("top_k_blocks")));
      EXPECT_NEAR(s, p.target_sparsity, 0.05) << row.seq_len << " " << p.target_sparsity;
    }
  }
}
