// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/eval/metrics.hpp"
#include "sparse_frontier/eval/parse.hpp"
#include "sparse_frontier/eval/score.hpp"
#include "sparse_frontier/eval/stats.hpp"
#include "sparse_frontier/taskgen/taskgen.hpp"

namespace ev = sparse_frontier::eval;
namespace tg = sparse_frontier::taskgen;
namespace sf = sparse_frontier;

TEST(Canonicalize, DropsCasePunctuationAndArticles) {
  EXPECT_EQ(ev::canonicalize("  The Quick, brown   FOX! "), "quick brown fox");
  EXPECT_EQ(ev::canonicalize("An apple a day"), "apple day");
  EXPECT_EQ(ev::canonicalize("theory"), "theory");
  EXPECT_EQ(ev::canonicalize("..."), "");
}

TEST(ExactMatch, PerQuestionMean) {
  EXPECT_EQ(ev::exact_match("The Bronze Shield.", "bronze shield"), 1.0);
  EXPECT_EQ(ev::exact_match("bronze shields", "bronze shield"), 0.0);
  EXPECT_DOUBLE_EQ(ev::exact_match(std::vector<std::string>{"a x", "y"}, {"x", "z", "w"}), 1.0 / 3);
  EXPECT_DOUBLE_EQ(ev::exact_match(std::vector<std::string>{}, {}), 1.0);
}

TEST(Iou, HandCases) {
  // {1,2,3,4,5} vs {2,3,4,5,6}: 4 shared over 6 total.
  EXPECT_DOUBLE_EQ(ev::iou({"1", "2", "3", "4", "5"}, {"2", "3", "4", "5", "6"}), 4.0 / 6);
  EXPECT_DOUBLE_EQ(ev::iou({"3", "3", "7"}, {"7", "3"}), 1.0);
  EXPECT_DOUBLE_EQ(ev::iou({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(ev::iou({}, {"1"}), 0.0);
}

TEST(F1, HandCases) {
  // pred {red, wooden, box}, gold {wooden, box, lid}: p = r = 2/3.
  EXPECT_NEAR(ev::f1("the red wooden box", "wooden box lid"), 2.0 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(ev::f1("x x y", "x y y"), 2.0 / 3);
  EXPECT_DOUBLE_EQ(ev::f1("", ""), 1.0);
  EXPECT_DOUBLE_EQ(ev::f1("a", "b"), 0.0);
}

TEST(Parse, LastCompleteAnswerBlockWins) {
  const auto r = ev::parse_answer(
      "<explanation>\nfirst\n</explanation>\n<answer>\nold\n</answer>\n"
      "<explanation> second </explanation><answer> new </answer><answer> dangling");
  EXPECT_TRUE(r.parse_ok);
  EXPECT_EQ(r.answer_block, "new");
  EXPECT_EQ(r.explanation, "second");
  EXPECT_FALSE(ev::parse_answer("no tags here").parse_ok);
  EXPECT_FALSE(ev::parse_answer("<answer> open only").parse_ok);
}

TEST(Extract, TaskSpecificFormats) {
  EXPECT_EQ(ev::extract_answers(tg::TaskKind::niah, "1. The answer for k-1 is ab-c.\n2. raw"),
            (std::vector<std::string>{"ab-c", "raw"}));
  EXPECT_EQ(ev::extract_answers(tg::TaskKind::vt, "ABC, DEF\nGHI"), (std::vector<std::string>{"ABC", "DEF", "GHI"}));
  EXPECT_EQ(ev::extract_answers(tg::TaskKind::story_filtering, "Chapter 3, 07 and 12"),
            (std::vector<std::string>{"3", "7", "12"}));
  EXPECT_EQ(ev::extract_answers(tg::TaskKind::cwe, "1. dog\n\n2. cat"), (std::vector<std::string>{"dog", "cat"}));
}

TEST(Score, GoldFormattedAnswersScoreOne) {
  for (auto kind : tg::kAllTaskKinds) {
    if (kind == tg::TaskKind::qa) continue;
    const auto s = tg::generate(kind, 4, 0);
    const auto r = ev::score_response(s, ev::format_gold_answer(s));
    EXPECT_TRUE(r.parse_ok) << tg::to_string(kind);
    EXPECT_DOUBLE_EQ(r.score, 1.0) << tg::to_string(kind);
    const auto bad = ev::score_response(s, "I could not find it.");
    EXPECT_FALSE(bad.parse_ok);
    EXPECT_EQ(bad.score, 0.0);
  }
}

TEST(Score, PartialNiahAnswer) {
  const auto s = tg::generate(tg::TaskKind::niah, 8, 0);
  std::string resp = ev::format_gold_answer(s);
  const auto pos = resp.find(s.gold[1]);
  resp.replace(pos, s.gold[1].size(), "wrong");
  EXPECT_DOUBLE_EQ(ev::score_response(s, resp).score, 0.75);
}

TEST(Aggregate, MeanAndSampleStandardError) {
  const auto s = ev::aggregate({1.0, 0.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(s.mean, 0.75);
  EXPECT_NEAR(s.std_error, std::sqrt(0.25 / 4), 1e-15);  // sd^2 = 0.75 / 3
  EXPECT_EQ(ev::aggregate({0.3}).std_error, 0.0);
  EXPECT_THROW(ev::aggregate(std::vector<double>{}), sf::InvalidInput);
  EXPECT_THROW(ev::aggregate({1.0, NAN}), sf::InvalidInput);
}

TEST(Aggregate, BoundedScoresHaveBoundedError) {
  sf::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(900);
    for (auto& x : v) x = sf::uniform01(rng) < 0.5 ? 0.0 : 1.0;
    EXPECT_LE(ev::aggregate(v).std_error, 0.5 / std::sqrt(899.0) + 1e-12);
  }
}

TEST(Curve, LinearInterpolation) {
  const ev::SparsityCurve c({{0.8, 0.5}, {0.0, 0.9}, {0.5, 0.8}});
  EXPECT_DOUBLE_EQ(ev::interpolate(c, 0.5), 0.8);
  // 0.8 + (0.6 - 0.5) / (0.8 - 0.5) * (0.5 - 0.8)
  EXPECT_NEAR(ev::interpolate(c, 0.6), 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(ev::interpolate(c, 0.0), 0.9);
  EXPECT_THROW(ev::interpolate(c, 0.9), sf::InvalidInput);
  EXPECT_THROW(ev::SparsityCurve({{0.2, 1}, {0.2, 0.5}}), sf::InvalidInput);
  EXPECT_THROW(ev::SparsityCurve({{1.0, 1}}), sf::InvalidInput);
  EXPECT_THROW(ev::interpolate(ev::SparsityCurve{}, 0.1), sf::InvalidInput);
}

TEST(Errors, RelativeAndAbsolute) {
  EXPECT_DOUBLE_EQ(ev::relative_error(0.8, 0.6), 0.25);
  EXPECT_DOUBLE_EQ(ev::relative_error(0.5, 0.7), -0.4);
  EXPECT_DOUBLE_EQ(ev::absolute_error(0.8, 0.6), 0.8 - 0.6);
  EXPECT_THROW(ev::relative_error(0.0, 0.5), sf::InvalidInput);
}
