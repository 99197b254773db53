// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sparse_frontier::eval {

/// Lowercase, drop punctuation, drop the articles a/an/the, collapse whitespace.
inline std::string canonicalize(std::string_view text) {
  std::string stripped;
  for (unsigned char c : text) {
    if (std::ispunct(c)) continue;
    stripped += static_cast<char>(std::tolower(c));
  }
  std::string out;
  std::size_t i = 0;
  while (i < stripped.size()) {
    while (i < stripped.size() && std::isspace(static_cast<unsigned char>(stripped[i]))) ++i;
    std::size_t j = i;
    while (j < stripped.size() && !std::isspace(static_cast<unsigned char>(stripped[j]))) ++j;
    if (j > i) {
      const std::string_view word(stripped.data() + i, j - i);
      if (word != "a" && word != "an" && word != "the") {
        if (!out.empty()) out += ' ';
        out += word;
      }
    }
    i = j;
  }
  return out;
}

inline std::vector<std::string> canonical_tokens(std::string_view text) {
  const std::string c = canonicalize(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < c.size()) {
    std::size_t j = c.find(' ', i);
    if (j == std::string::npos) j = c.size();
    out.emplace_back(c.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

inline double exact_match(std::string_view pred, std::string_view gold) {
  return canonicalize(pred) == canonicalize(gold) ? 1.0 : 0.0;
}

/// Mean per-question exact match; missing predictions score 0.
inline double exact_match(const std::vector<std::string>& preds, const std::vector<std::string>& golds) {
  if (golds.empty()) return preds.empty() ? 1.0 : 0.0;
  double total = 0;
  for (std::size_t i = 0; i < golds.size(); ++i)
    if (i < preds.size()) total += exact_match(preds[i], golds[i]);
  return total / static_cast<double>(golds.size());
}

inline std::set<std::string> canonical_set(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& s : items) {
    std::string c = canonicalize(s);
    if (!c.empty()) out.insert(std::move(c));
  }
  return out;
}

/// |pred ∩ gold| / |pred ∪ gold| over canonical forms; two empty sets score 1.
inline double iou(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  const auto p = canonical_set(pred);
  const auto g = canonical_set(gold);
  if (p.empty() && g.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : p) inter += g.count(x);
  const std::size_t uni = p.size() + g.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Token F1 with multiset overlap.
inline double f1(std::string_view pred, std::string_view gold) {
  const auto p = canonical_tokens(pred);
  const auto g = canonical_tokens(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * precision * recall / (precision + recall);
}

}  // namespace sparse_frontier::eval
