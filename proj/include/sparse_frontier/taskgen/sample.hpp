// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::taskgen {

enum class TaskKind { niah, cwe, vt, story_retrieval, story_filtering, story_multihop, qa };
enum class MetricKind { exact_match, iou, f1 };

inline constexpr TaskKind kAllTaskKinds[] = {TaskKind::niah,
                                             TaskKind::cwe,
                                             TaskKind::vt,
                                             TaskKind::story_retrieval,
                                             TaskKind::story_filtering,
                                             TaskKind::story_multihop,
                                             TaskKind::qa};

inline std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::niah:
      return "niah";
    case TaskKind::cwe:
      return "cwe";
    case TaskKind::vt:
      return "vt";
    case TaskKind::story_retrieval:
      return "story_retrieval";
    case TaskKind::story_filtering:
      return "story_filtering";
    case TaskKind::story_multihop:
      return "story_multihop";
    case TaskKind::qa:
      return "qa";
  }
  return "?";
}

inline std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::exact_match:
      return "exact_match";
    case MetricKind::iou:
      return "iou";
    case MetricKind::f1:
      return "f1";
  }
  return "?";
}

inline TaskKind parse_task_kind(std::string_view s) {
  for (TaskKind k : kAllTaskKinds)
    if (to_string(k) == s) return k;
  throw ConfigError("unknown task kind: " + std::string(s));
}

inline MetricKind parse_metric_kind(std::string_view s) {
  for (MetricKind m : {MetricKind::exact_match, MetricKind::iou, MetricKind::f1})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown metric kind: " + std::string(s));
}

/// Metric assignment per task. QA accepts exact match (multiple choice) or F1
/// (open-ended).
inline bool metric_allowed(TaskKind kind, MetricKind metric) {
  switch (kind) {
    case TaskKind::niah:
    case TaskKind::story_retrieval:
    case TaskKind::story_multihop:
      return metric == MetricKind::exact_match;
    case TaskKind::cwe:
    case TaskKind::vt:
    case TaskKind::story_filtering:
      return metric == MetricKind::iou;
    case TaskKind::qa:
      return metric == MetricKind::exact_match || metric == MetricKind::f1;
  }
  return false;
}

struct TaskSample {
  std::string id;
  TaskKind kind = TaskKind::niah;
  std::string context;
  std::vector<std::string> questions;
  std::vector<std::string> gold;
  MetricKind metric = MetricKind::exact_match;
  std::size_t target_tokens = 0;  // 0 when length targeting is off
  std::uint64_t seed = 0;

  void validate() const {
    sparse_frontier::detail::require<InvalidInput>(!gold.empty(), "task sample has no gold answers");
    sparse_frontier::detail::require<InvalidInput>(!questions.empty(), "task sample has no questions");
    sparse_frontier::detail::require<InvalidInput>(metric_allowed(kind, metric),
                                  "metric " + std::string(to_string(metric)) + " not allowed for " +
                                      std::string(to_string(kind)));
  }

  friend bool operator==(const TaskSample&, const TaskSample&) = default;
};

inline void to_json(nlohmann::json& j, const TaskSample& s) {
  j = {{"id", s.id},
       {"kind", to_string(s.kind)},
       {"metric", to_string(s.metric)},
       {"seed", s.seed},
       {"target_tokens", s.target_tokens},
       {"questions", s.questions},
       {"gold", s.gold},
       {"context", s.context}};
}

inline void from_json(const nlohmann::json& j, TaskSample& s) {
  s.id = j.at("id").get<std::string>();
  s.kind = parse_task_kind(j.at("kind").get<std::string>());
  s.metric = parse_metric_kind(j.at("metric").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.target_tokens = j.value("target_tokens", std::size_t{0});
  s.questions = j.at("questions").get<std::vector<std::string>>();
  s.gold = j.at("gold").get<std::vector<std::string>>();
  s.context = j.at("context").get<std::string>();
}

}  // namespace sparse_frontier::taskgen
