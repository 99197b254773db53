// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Key-value retrieval, common-word counting and variable tracking tasks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/taskgen/length.hpp"
#include "sparse_frontier/taskgen/vocabulary.hpp"

namespace sparse_frontier::taskgen {

inline constexpr std::size_t kNiahQueries = 4;
inline constexpr std::size_t kCweCommonWords = 10;
inline constexpr std::size_t kCweCommonRepeats = 30;
inline constexpr std::size_t kCweDistractorRepeats = 3;

namespace detail {

enum : std::uint64_t { kNiahStream = 0x6e696168, kCweStream = 0x637765, kVtStream = 0x7674 };

inline std::string make_id(TaskKind kind, std::uint64_t seed, std::size_t target) {
  return std::string(to_string(kind)) + "-" + std::to_string(target) + "-" + std::to_string(seed);
}

inline std::string random_chars(Rng& rng, std::size_t n, std::string_view alphabet) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += alphabet[uniform_index(rng, alphabet.size())];
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

struct KeyValue {
  std::string key;
  std::string value;
};

/// Pair i depends only on (seed, i), so longer haystacks extend shorter ones.
inline std::vector<KeyValue> niah_pairs(std::uint64_t seed, std::size_t count) {
  const auto words = english_words();
  std::vector<KeyValue> pairs;
  std::set<std::string> keys;
  std::set<std::string> values;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      Rng rng(derive_seed(seed, kNiahStream, i, attempt));
      KeyValue kv;
      kv.key = std::string(words[uniform_index(rng, words.size())]) + "-" +
               std::string(words[uniform_index(rng, words.size())]);
      kv.value = random_chars(rng, 4, "abcdefghijklmnopqrstuvwxyz0123456789") + "-" +
                 random_chars(rng, 4, "abcdefghijklmnopqrstuvwxyz0123456789") + "-" +
                 random_chars(rng, 4, "abcdefghijklmnopqrstuvwxyz0123456789");
      if (keys.count(kv.key) || values.count(kv.value)) continue;
      keys.insert(kv.key);
      values.insert(kv.value);
      pairs.push_back(std::move(kv));
      break;
    }
  }
  return pairs;
}

inline TaskSample build_niah(std::uint64_t seed, std::size_t num_pairs) {
  auto pairs = niah_pairs(seed, num_pairs);
  Rng rng(derive_seed(seed, kNiahStream, 0xffffffffULL));
  const auto queried = sample_without_replacement(rng, pairs.size(), kNiahQueries);
  shuffle(pairs, rng);
  TaskSample s;
  s.kind = TaskKind::niah;
  s.metric = MetricKind::exact_match;
  s.seed = seed;
  std::vector<std::string> lines;
  for (const auto& kv : pairs) lines.push_back("The value for " + kv.key + " is: " + kv.value + ".");
  s.context = join(lines, "\n");
  std::vector<std::string> query_keys;
  for (std::size_t q : queried) {
    query_keys.push_back(pairs[q].key);
    s.gold.push_back(pairs[q].value);
  }
  s.questions = {"Extract the values for the following keys:\n" + join(query_keys, ", ")};
  return s;
}

}  // namespace detail

/// Four queried key-value pairs among distractor pairs. With a token target
/// the pair count is fitted to it and `num_pairs` is the lower bound.
inline TaskSample gen_niah(std::uint64_t seed, std::size_t num_pairs, std::size_t target_tokens,
                           const Tokenizer& tok = default_tokenizer()) {
  sparse_frontier::detail::require<InvalidInput>(num_pairs >= kNiahQueries,
                                                 "niah needs at least 4 pairs");
  TaskSample s = target_tokens == 0
                     ? detail::build_niah(seed, num_pairs)
                     : fit_to_length(target_tokens, num_pairs, 1u << 22,
                                     [&](std::size_t n) { return detail::build_niah(seed, n); }, tok);
  s.id = detail::make_id(TaskKind::niah, seed, target_tokens);
  return s;
}

namespace detail {

inline TaskSample build_cwe(std::uint64_t seed, std::size_t distractors) {
  const auto words = english_words();
  const std::size_t needed = kCweCommonWords + distractors;
  sparse_frontier::detail::require<GenerationError>(
      needed <= words.size(), "vocabulary exhausted: need " + std::to_string(needed) + " words, have " +
                                  std::to_string(words.size()));
  Rng rng(derive_seed(seed, kCweStream));
  const auto picked = sample_without_replacement(rng, words.size(), needed);
  std::vector<std::string> entries;
  TaskSample s;
  for (std::size_t i = 0; i < needed; ++i) {
    const std::string w(words[picked[i]]);
    const std::size_t reps = i < kCweCommonWords ? kCweCommonRepeats : kCweDistractorRepeats;
    for (std::size_t r = 0; r < reps; ++r) entries.push_back(w);
    if (i < kCweCommonWords) s.gold.push_back(w);
  }
  Rng order(derive_seed(seed, kCweStream, distractors));
  shuffle(entries, order);
  std::string ctx;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) ctx += '\n';
    ctx += std::to_string(i + 1) + ". " + entries[i];
  }
  s.kind = TaskKind::cwe;
  s.metric = MetricKind::iou;
  s.seed = seed;
  s.context = std::move(ctx);
  s.questions = {"The list contains exactly 10 words that appear 30 times each.\n"
                 "All other words appear 3 times each.\n"
                 "Your task is to identify the 10 words that appear 30 times each."};
  return s;
}

}  // namespace detail

/// Ten words repeated 30 times among distractors repeated 3 times. Without a
/// token target, `distractors` words are used.
inline TaskSample gen_cwe(std::uint64_t seed, std::size_t target_tokens,
                          const Tokenizer& tok = default_tokenizer(), std::size_t distractors = 20) {
  const std::size_t max_distractors = english_words().size() - kCweCommonWords;
  if (target_tokens > 0) {
    const std::size_t ceiling = prompt_tokens(detail::build_cwe(seed, max_distractors), tok);
    sparse_frontier::detail::require<GenerationError>(
        static_cast<double>(ceiling) >= kMinLengthFraction * static_cast<double>(target_tokens),
        "vocabulary exhausted: the full word list yields only " + std::to_string(ceiling) +
            " tokens");
  }
  TaskSample s = target_tokens == 0
                     ? detail::build_cwe(seed, distractors)
                     : fit_to_length(target_tokens, 0, max_distractors,
                                     [&](std::size_t n) { return detail::build_cwe(seed, n); }, tok);
  s.id = detail::make_id(TaskKind::cwe, seed, target_tokens);
  return s;
}

inline constexpr const char* kVtFiller =
    "The grass is green. The sky is blue. The sun is yellow. Here we go. There and back again.";

struct VtOptions {
  std::size_t num_chains = 2;
  std::size_t chain_depth = 5;
  std::size_t filler_lines = 50;  // used when no token target is set
};

namespace detail {

struct VtChains {
  std::vector<std::vector<std::string>> names;
  std::vector<std::uint32_t> values;
};

inline VtChains vt_chains(std::uint64_t seed, const VtOptions& opt) {
  Rng rng(derive_seed(seed, kVtStream));
  VtChains c;
  std::set<std::string> used;
  std::set<std::uint32_t> used_values;
  for (std::size_t k = 0; k < opt.num_chains; ++k) {
    std::uint32_t v;
    do {
      v = static_cast<std::uint32_t>(10000 + uniform_index(rng, 90000));
    } while (used_values.count(v));
    used_values.insert(v);
    c.values.push_back(v);
    std::vector<std::string> chain;
    for (std::size_t d = 0; d < opt.chain_depth; ++d) {
      std::string name;
      do {
        name = random_chars(rng, 5, "ABCDEFGHIJKLMNOPQRSTUVWXYZ");
      } while (used.count(name));
      used.insert(name);
      chain.push_back(name);
    }
    c.names.push_back(std::move(chain));
  }
  return c;
}

inline TaskSample build_vt(std::uint64_t seed, const VtOptions& opt, std::size_t filler) {
  const VtChains c = vt_chains(seed, opt);
  std::vector<std::string> statements;
  std::vector<std::size_t> chain_of;
  std::vector<std::size_t> next(opt.num_chains, 0);
  Rng rng(derive_seed(seed, kVtStream, filler));
  // Interleave chains at random while keeping each chain in definition order.
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < opt.num_chains; ++k)
    for (std::size_t d = 0; d < opt.chain_depth; ++d) slots.push_back(k);
  shuffle(slots, rng);
  for (std::size_t k : slots) {
    const std::size_t d = next[k]++;
    const auto& chain = c.names[k];
    statements.push_back(d == 0 ? "VAR " + chain[0] + " = " + std::to_string(c.values[k])
                                : "VAR " + chain[d] + " = VAR " + chain[d - 1]);
  }
  // Statement i goes after filler line positions[i].
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < statements.size(); ++i) positions.push_back(uniform_index(rng, filler + 1));
  std::sort(positions.begin(), positions.end());
  std::vector<std::string> lines;
  std::size_t si = 0;
  for (std::size_t f = 0; f <= filler; ++f) {
    while (si < statements.size() && positions[si] == f) lines.push_back(statements[si++]);
    if (f < filler) lines.push_back(kVtFiller);
  }
  TaskSample s;
  s.kind = TaskKind::vt;
  s.metric = MetricKind::iou;
  s.seed = seed;
  s.context = join(lines, "\n");
  const std::string v = std::to_string(c.values[0]);
  s.questions = {"Which variables resolve to the value " + v + "? A variable resolves to " + v +
                 " if it is either directly assigned " + v +
                 ", or assigned to another variable that resolves to " + v + "."};
  s.gold = c.names[0];
  return s;
}

}  // namespace detail

/// Chained assignments hidden in filler text; the first chain holds the
/// queried value.
inline TaskSample gen_vt(std::uint64_t seed, std::size_t target_tokens, const VtOptions& opt = {},
                         const Tokenizer& tok = default_tokenizer()) {
  sparse_frontier::detail::require<InvalidInput>(opt.num_chains >= 1 && opt.chain_depth >= 1,
                                                 "vt needs at least one chain of depth >= 1");
  TaskSample s = target_tokens == 0
                     ? detail::build_vt(seed, opt, opt.filler_lines)
                     : fit_to_length(target_tokens, 0, 1u << 22,
                                     [&](std::size_t n) { return detail::build_vt(seed, opt, n); }, tok);
  s.id = detail::make_id(TaskKind::vt, seed, target_tokens);
  return s;
}

/// Variables whose assignment chain ends at `value`, resolved over "VAR X = ..."
/// lines in `text`, sorted by name.
inline std::vector<std::string> resolve_variables(std::string_view text, std::uint64_t value) {
  std::map<std::string, std::string> copy_of;
  std::map<std::string, std::uint64_t> literal;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.rfind("VAR ", 0) != 0) continue;
    const std::size_t eq = line.find(" = ");
    if (eq == std::string_view::npos) continue;
    std::string lhs(line.substr(4, eq - 4));
    std::string_view rhs = line.substr(eq + 3);
    if (rhs.rfind("VAR ", 0) == 0) {
      copy_of[lhs] = std::string(rhs.substr(4));
    } else if (!rhs.empty() && std::all_of(rhs.begin(), rhs.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      literal[lhs] = std::stoull(std::string(rhs));
    }
  }
  std::set<std::string> names;
  for (const auto& [k, _] : copy_of) names.insert(k);
  for (const auto& [k, _] : literal) names.insert(k);
  std::vector<std::string> out;
  for (const auto& name : names) {
    std::string cur = name;
    for (std::size_t steps = 0; steps <= names.size(); ++steps) {
      if (auto it = literal.find(cur); it != literal.end()) {
        if (it->second == value) out.push_back(name);
        break;
      }
      auto it = copy_of.find(cur);
      if (it == copy_of.end()) break;
      cur = it->second;
    }
  }
  return out;
}

}  // namespace sparse_frontier::taskgen
