// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Quest page selection for decoding. Keys are grouped into fixed-size pages
// summarised by their elementwise min and max; a query scores a page with the
// upper bound sum_c max(q_c * min_c, q_c * max_c) on q.k over the page.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"
#include "sparse_frontier/patterns/plans.hpp"

namespace sparse_frontier {

inline constexpr std::size_t kDefaultPageSize = 16;

/// Min/max representatives over keys [0, length) of kv head `kv_head`.
inline PageReps quest_index(const Tensor3& keys, std::size_t kv_head,
                            std::size_t page_size = kDefaultPageSize,
                            std::size_t length = std::numeric_limits<std::size_t>::max()) {
  detail::require<InvalidInput>(page_size >= 1, "page_size must be positive");
  const std::size_t n = std::min(length, keys.rows());
  const std::size_t d = keys.cols();
  PageReps reps;
  reps.page_size = page_size;
  const std::size_t pages = (n + page_size - 1) / page_size;
  reps.mins.assign(pages, std::vector<double>(d, std::numeric_limits<double>::infinity()));
  reps.maxs.assign(pages, std::vector<double>(d, -std::numeric_limits<double>::infinity()));
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = keys.row(kv_head, j);
    auto& lo = reps.mins[j / page_size];
    auto& hi = reps.maxs[j / page_size];
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], k[c]);
      hi[c] = std::max(hi[c], k[c]);
    }
  }
  return reps;
}

/// Page representatives for every kv head.
inline std::vector<PageReps> quest_index(const AttentionInputs& inputs,
                                         std::size_t page_size = kDefaultPageSize,
                                         std::size_t length =
                                             std::numeric_limits<std::size_t>::max()) {
  std::vector<PageReps> out;
  out.reserve(inputs.num_kv_heads());
  for (std::size_t g = 0; g < inputs.num_kv_heads(); ++g)
    out.push_back(quest_index(inputs.keys, g, page_size, length));
  return out;
}

inline double quest_page_score(std::span<const double> query, const PageReps& reps,
                               std::size_t page) {
  double s = 0.0;
  for (std::size_t c = 0; c < query.size(); ++c) {
    s += std::max(query[c] * reps.mins[page][c], query[c] * reps.maxs[page][c]);
  }
  return s;
}

/// Selects pages for the query at `position`: per kv head, page scores are the
/// max over the group's query heads; the top floor(token_budget / page_size)
/// pages are kept, always including the page holding `position`.
inline PagePlan quest_select(const AttentionInputs& inputs, std::size_t position,
                             const std::vector<PageReps>& reps, std::size_t token_budget) {
  inputs.validate();
  detail::require<InvalidInput>(position < inputs.seq_len(), "decode position out of range");
  detail::require<InvalidInput>(reps.size() == inputs.num_kv_heads(),
                                "need page representatives for every kv head");
  const std::size_t page_size = reps.empty() ? kDefaultPageSize : reps.front().page_size;
  detail::require<InvalidInput>(token_budget >= page_size,
                                "token_budget must hold at least one page");
  const std::size_t current = position / page_size;
  const std::size_t visible = current + 1;
  const std::size_t keep = std::min(visible, token_budget / page_size);

  PagePlan plan;
  plan.seq_len = inputs.seq_len();
  plan.page_size = page_size;
  plan.token_budget = token_budget;
  plan.position = position;
  plan.selected_pages.resize(inputs.num_kv_heads());
  for (std::size_t g = 0; g < inputs.num_kv_heads(); ++g) {
    detail::require<InvalidInput>(reps[g].num_pages() >= visible,
                                  "page representatives do not cover the position");
    std::vector<double> scores(visible, -std::numeric_limits<double>::infinity());
    for (std::size_t h : inputs.query_heads_of(g)) {
      const auto q = inputs.queries.row(h, position);
      for (std::size_t p = 0; p < visible; ++p)
        scores[p] = std::max(scores[p], quest_page_score(q, reps[g], p));
    }
    KeySet chosen{static_cast<KeyIndex>(current)};
    for (KeyIndex p : detail::rank_descending(scores)) {
      if (chosen.size() >= keep) break;
      if (p != current) chosen.push_back(p);
    }
    std::sort(chosen.begin(), chosen.end());
    plan.selected_pages[g] = std::move(chosen);
  }
  return plan;
}

/// Convenience: index the first position+1 keys and select pages.
inline PagePlan build_quest(const AttentionInputs& inputs, std::size_t token_budget,
                            std::size_t page_size = kDefaultPageSize,
                            std::size_t position = std::numeric_limits<std::size_t>::max()) {
  const std::size_t pos = std::min(position, inputs.seq_len() - 1);
  return quest_select(inputs, pos, quest_index(inputs, page_size, pos + 1), token_budget);
}

}  // namespace sparse_frontier
