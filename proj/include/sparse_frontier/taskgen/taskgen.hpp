// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/taskgen/prompt.hpp"
#include "sparse_frontier/taskgen/qa.hpp"
#include "sparse_frontier/taskgen/ruler.hpp"
#include "sparse_frontier/taskgen/story.hpp"

namespace sparse_frontier::taskgen {

struct GenerationOptions {
  std::size_t niah_pairs = 4;
  VtOptions vt;
  StoryOptions story;
  std::size_t story_chapters = 20;  // used when no token target is set
  std::size_t cwe_distractors = 20;
};

/// Synthetic sample for any kind except QA, which needs supplied documents.
inline TaskSample generate(TaskKind kind, std::uint64_t seed, std::size_t target_tokens,
                           const GenerationOptions& opt = {},
                           const Tokenizer& tok = default_tokenizer()) {
  switch (kind) {
    case TaskKind::niah:
      return gen_niah(seed, opt.niah_pairs, target_tokens, tok);
    case TaskKind::cwe:
      return gen_cwe(seed, target_tokens, tok, opt.cwe_distractors);
    case TaskKind::vt:
      return gen_vt(seed, target_tokens, opt.vt, tok);
    case TaskKind::story_retrieval:
    case TaskKind::story_filtering:
    case TaskKind::story_multihop:
      return gen_story(seed, kind, opt.story_chapters, target_tokens, opt.story, tok);
    case TaskKind::qa:
      break;
  }
  throw InvalidInput("QA samples are assembled from supplied documents");
}

/// One JSON object per line: the sample fields plus its rendered prompt.
inline std::string sample_to_jsonl(const TaskSample& s) {
  nlohmann::json j = s;
  j["prompt"] = render_prompt(s);
  return j.dump();
}

inline TaskSample sample_from_jsonl(const std::string& line) {
  try {
    return nlohmann::json::parse(line).get<TaskSample>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sample line: ") + e.what());
  }
}

inline void write_samples(const std::string& path, const std::vector<TaskSample>& samples) {
  std::ofstream out(path);
  sparse_frontier::detail::require<Error>(out.good(), "cannot write " + path);
  for (const auto& s : samples) out << sample_to_jsonl(s) << '\n';
}

inline std::vector<TaskSample> read_samples(const std::string& path) {
  std::ifstream in(path);
  sparse_frontier::detail::require<ConfigError>(in.good(), "cannot open " + path);
  std::vector<TaskSample> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(sample_from_jsonl(line));
  return out;
}

}  // namespace sparse_frontier::taskgen
