// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/attention/synthetic.hpp"
#include "support/oracles.hpp"

namespace sf = sparse_frontier;

namespace {

sf::AttentionInputs random_inputs(std::size_t hq, std::size_t hkv, std::size_t n, std::size_t d,
                                  std::uint64_t seed) {
  sf::SyntheticSpec spec;
  spec.num_q_heads = hq;
  spec.num_kv_heads = hkv;
  spec.seq_len = n;
  spec.head_dim = d;
  spec.seed = seed;
  return sf::make_synthetic_inputs(spec);
}

double max_diff(const sf::Tensor3& a, const sf::Tensor3& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

}  // namespace

TEST(DensePrefill, MatchesNaiveOracleWithGroupedHeads) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = random_inputs(4, 2, 33, 8, seed);
    EXPECT_LT(max_diff(sf::dense_prefill(in).output, oracle::naive_attention(in)), 1e-10);
  }
}

TEST(DensePrefill, FirstRowCopiesFirstValue) {
  const auto in = random_inputs(2, 1, 5, 4, 3);
  const auto out = sf::dense_prefill(in).output;
  for (std::size_t h = 0; h < 2; ++h)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(out(h, 0, c), in.values(0, 0, c));
}

TEST(DensePrefill, WeightRowsSumToOne) {
  const auto in = random_inputs(2, 2, 20, 4, 1);
  const auto out = sf::dense_prefill(in, {true});
  ASSERT_TRUE(out.weights);
  for (const auto& row : *out.weights) {
    double s = 0;
    for (double p : row.probs) s += p;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(MaskedAttention, FullMaskEqualsDense) {
  const auto in = random_inputs(4, 1, 40, 8, 5);
  const auto full = sf::masked_attention(in, sf::CellMask::full_causal(4, 40));
  EXPECT_LT(max_diff(full.output, sf::dense_prefill(in).output), 1e-12);
}

TEST(MaskedAttention, DiagonalMaskReturnsOwnValue) {
  const auto in = random_inputs(2, 2, 10, 4, 6);
  const auto out = sf::masked_attention(in, sf::CellMask::diagonal(2, 10)).output;
  for (std::size_t h = 0; h < 2; ++h)
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(out(h, i, c), in.values(h, i, c));
}

TEST(MaskedAttention, RejectsFutureEmptyAndUnsortedRows) {
  const auto in = random_inputs(1, 1, 4, 2, 0);
  auto mask = sf::CellMask::full_causal(1, 4);
  mask.rows[0][1] = {0, 2};
  EXPECT_THROW(sf::masked_attention(in, mask), sf::RejectedPlan);
  mask = sf::CellMask::full_causal(1, 4);
  mask.rows[0][2] = {};
  EXPECT_THROW(sf::masked_attention(in, mask), sf::RejectedPlan);
  mask = sf::CellMask::full_causal(1, 4);
  mask.rows[0][3] = {2, 1};
  EXPECT_THROW(sf::masked_attention(in, mask), sf::RejectedPlan);
  EXPECT_THROW(sf::masked_attention(in, sf::CellMask::full_causal(2, 4)), sf::RejectedPlan);
}

TEST(DecodeStep, FullRowEqualsDensePrefillRow) {
  const auto in = random_inputs(4, 2, 30, 8, 8);
  const auto dense = sf::dense_prefill(in).output;
  sf::KeySet row;
  for (sf::KeyIndex j = 0; j <= 17; ++j) row.push_back(j);
  const auto out = sf::decode_step(in, 17, row).output;
  for (std::size_t h = 0; h < 4; ++h)
    for (std::size_t c = 0; c < 8; ++c) EXPECT_NEAR(out(h, 0, c), dense(h, 17, c), 1e-12);
  EXPECT_THROW(sf::decode_step(in, 30, row), sf::InvalidInput);
}

TEST(Inputs, ValidationCatchesShapeAndValueErrors) {
  auto in = random_inputs(4, 2, 8, 4, 0);
  EXPECT_NO_THROW(in.validate());
  auto bad = in;
  bad.group_map = {0, 0, 0, 1};
  EXPECT_THROW(bad.validate(), sf::InvalidInput);
  bad = in;
  bad.keys(0, 3, 1) = std::nan("");
  EXPECT_THROW(bad.validate(), sf::InvalidInput);
  bad = in;
  bad.values = sf::Tensor3(2, 7, 4);
  EXPECT_THROW(bad.validate(), sf::InvalidInput);
  EXPECT_THROW(random_inputs(3, 2, 8, 4, 0), sf::InvalidInput);
}

TEST(Synthetic, GeneratorsAreDeterministicAndNamed) {
  for (const auto& name : sf::synthetic_generators()) {
    sf::SyntheticSpec spec;
    spec.generator = name;
    spec.seq_len = 64;
    EXPECT_EQ(sf::make_synthetic_inputs(spec).keys, sf::make_synthetic_inputs(spec).keys) << name;
  }
  sf::SyntheticSpec spec;
  spec.generator = "gaussian_blobs";
  EXPECT_THROW(sf::make_synthetic_inputs(spec), sf::InvalidInput);
}

TEST(Synthetic, ClusteredInputsConcentrateMassOnSinksAndLocals) {
  sf::SyntheticSpec spec;
  spec.generator = "clustered";
  spec.seq_len = 256;
  const auto in = sf::make_synthetic_inputs(spec);
  const auto w = sf::dense_prefill(in, {true}).weights.value();
  // Mass on the first 4 keys and the last 16 keys of late rows.
  double covered = 0;
  for (std::size_t i = 128; i < 256; ++i) {
    const auto& row = w[i];
    for (std::size_t t = 0; t < row.keys.size(); ++t)
      if (row.keys[t] < 4 || row.keys[t] + 16 > i) covered += row.probs[t];
  }
  EXPECT_GT(covered / 128.0, 20.0 / 256.0 * 2);
}
