// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Question answering over user-supplied documents padded with distractors.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/core/random.hpp"
#include "sparse_frontier/taskgen/length.hpp"
#include "sparse_frontier/taskgen/ruler.hpp"

namespace sparse_frontier::taskgen {

inline constexpr std::size_t kMaxAnswerDocumentTokens = 8000;

struct QaDocument {
  std::string title;
  std::string text;
  std::string question;
  std::vector<std::string> answers;

  friend bool operator==(const QaDocument&, const QaDocument&) = default;
};

inline void from_json(const nlohmann::json& j, QaDocument& d) {
  d.title = j.value("title", std::string());
  d.text = j.at("text").get<std::string>();
  d.question = j.value("question", std::string());
  d.answers.clear();
  if (j.contains("answer")) {
    const auto& a = j.at("answer");
    if (a.is_array()) {
      d.answers = a.get<std::vector<std::string>>();
    } else if (!a.is_null()) {
      d.answers.push_back(a.get<std::string>());
    }
  }
}

inline void to_json(nlohmann::json& j, const QaDocument& d) {
  j = {{"title", d.title}, {"text", d.text}, {"question", d.question}, {"answer", d.answers}};
}

/// Reads a JSON array of {title, text, question, answer} records.
inline std::vector<QaDocument> load_qa_documents(const std::string& path) {
  std::ifstream in(path);
  sparse_frontier::detail::require<ConfigError>(in.good(), "cannot open QA document file " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j.get<std::vector<QaDocument>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed QA document file " + path + ": " + e.what());
  }
}

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool contains_any(const std::string& text_lower, const std::vector<std::string>& needles) {
  for (const auto& n : needles)
    if (!n.empty() && text_lower.find(lower(n)) != std::string::npos) return true;
  return false;
}

inline TaskSample qa_sample(const std::vector<const QaDocument*>& docs, const QaDocument* answer,
                            const std::string& question, const std::vector<std::string>& gold,
                            MetricKind metric, std::uint64_t seed) {
  std::vector<const QaDocument*> order = docs;
  order.push_back(answer);
  Rng rng(derive_seed(seed, 0x7161ULL, order.size()));
  shuffle(order, rng);
  TaskSample s;
  s.kind = TaskKind::qa;
  s.metric = metric;
  s.seed = seed;
  s.gold = gold;
  std::size_t answer_number = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) s.context += "\n\n";
    s.context += "Document " + std::to_string(i + 1) + ":\n" + order[i]->text;
    if (order[i] == answer) answer_number = i + 1;
  }
  s.questions = {"Question about document " + std::to_string(answer_number) + ":\n" + question};
  return s;
}

}  // namespace detail

/// Numbers the answer document among shuffled distractors. Distractors that
/// mention a gold answer are skipped. With a token target, distractors are
/// added greedily while the prompt fits.
inline TaskSample assemble_qa(const std::vector<QaDocument>& documents, std::size_t answer_doc_index,
                              const std::string& question, const std::vector<std::string>& gold,
                              std::size_t target_tokens, std::uint64_t seed,
                              MetricKind metric = MetricKind::f1,
                              const Tokenizer& tok = default_tokenizer()) {
  using sparse_frontier::detail::require;
  require<InvalidInput>(answer_doc_index < documents.size(), "answer document index out of range");
  require<InvalidInput>(!gold.empty(), "QA sample needs a gold answer");
  require<InvalidInput>(metric_allowed(TaskKind::qa, metric), "QA metric must be f1 or exact_match");
  const QaDocument* answer = &documents[answer_doc_index];
  require<GenerationError>(tok.count(answer->text) <= kMaxAnswerDocumentTokens,
                           "answer document exceeds 8000 tokens");
  if (metric == MetricKind::f1) {
    const std::string text = detail::lower(answer->text);
    for (const auto& g : gold)
      require<GenerationError>(text.find(detail::lower(g)) != std::string::npos,
                               "gold answer '" + g + "' not found in the answer document");
  }
  std::vector<const QaDocument*> pool;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (i == answer_doc_index || documents[i].text == answer->text) continue;
    if (detail::contains_any(detail::lower(documents[i].text), gold)) continue;
    pool.push_back(&documents[i]);
  }
  Rng rng(derive_seed(seed, 0x7161ULL));
  shuffle(pool, rng);

  std::vector<const QaDocument*> chosen;
  if (target_tokens == 0) {
    chosen = pool;
  } else {
    const TaskSample base = detail::qa_sample({}, answer, question, gold, metric, seed);
    std::size_t used = prompt_tokens(base, tok);
    require<GenerationError>(used <= target_tokens,
                             "target of " + std::to_string(target_tokens) +
                                 " tokens is too small for the answer document");
    for (const QaDocument* d : pool) {
      const std::size_t cost = tok.count("Document 0000:\n" + d->text) + 1;
      if (used + cost > target_tokens) continue;
      used += cost;
      chosen.push_back(d);
    }
  }
  TaskSample s = detail::qa_sample(chosen, answer, question, gold, metric, seed);
  if (target_tokens > 0) {
    while (prompt_tokens(s, tok) > target_tokens && !chosen.empty()) {
      chosen.pop_back();
      s = detail::qa_sample(chosen, answer, question, gold, metric, seed);
    }
    const std::size_t tokens = prompt_tokens(s, tok);
    require<GenerationError>(
        static_cast<double>(tokens) >= kMinLengthFraction * static_cast<double>(target_tokens),
        "insufficient distractors: reached " + std::to_string(tokens) + " of " +
            std::to_string(target_tokens) + " tokens");
    s.target_tokens = target_tokens;
  }
  s.id = "qa-" + std::to_string(target_tokens) + "-" + std::to_string(seed) + "-" +
         std::to_string(answer_doc_index);
  return s;
}

/// QA sample for document `answer_doc_index` using its own question and answers.
inline TaskSample assemble_qa(const std::vector<QaDocument>& documents, std::size_t answer_doc_index,
                              std::size_t target_tokens, std::uint64_t seed,
                              MetricKind metric = MetricKind::f1,
                              const Tokenizer& tok = default_tokenizer()) {
  sparse_frontier::detail::require<InvalidInput>(answer_doc_index < documents.size(),
                                                 "answer document index out of range");
  const QaDocument& d = documents[answer_doc_index];
  return assemble_qa(documents, answer_doc_index, d.question, d.answers, target_tokens, seed, metric,
                     tok);
}

}  // namespace sparse_frontier::taskgen
