// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Task-aware answer extraction and scoring.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "sparse_frontier/eval/metrics.hpp"
#include "sparse_frontier/eval/parse.hpp"
#include "sparse_frontier/taskgen/sample.hpp"

namespace sparse_frontier::eval {

namespace detail {

inline std::vector<std::string> nonempty_lines(std::string_view block) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= block.size()) {
    std::size_t end = block.find('\n', pos);
    if (end == std::string_view::npos) end = block.size();
    std::string line = trim(block.substr(pos, end - pos));
    if (!line.empty()) out.push_back(std::move(line));
    pos = end + 1;
  }
  return out;
}

/// Drops a leading "12." or "12)" list marker.
inline std::string strip_number(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) return trim(line.substr(i + 1));
  return trim(line);
}

inline std::vector<std::string> split_any(std::string_view text, std::string_view separators) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (separators.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Value from "The answer for KEY is VALUE." or the whole line otherwise.
inline std::string niah_value(const std::string& line) {
  const std::string body = strip_number(line);
  const std::string_view marker = " is ";
  if (body.rfind("The answer for ", 0) == 0) {
    const std::size_t pos = body.find(marker);
    if (pos != std::string::npos) {
      std::string v = trim(std::string_view(body).substr(pos + marker.size()));
      if (!v.empty() && v.back() == '.') v.pop_back();
      return v;
    }
  }
  return body;
}

}  // namespace detail

/// Predicted answers in the task's answer format.
inline std::vector<std::string> extract_answers(taskgen::TaskKind kind, std::string_view block) {
  using taskgen::TaskKind;
  std::vector<std::string> out;
  switch (kind) {
    case TaskKind::niah:
      for (const auto& l : detail::nonempty_lines(block)) out.push_back(detail::niah_value(l));
      break;
    case TaskKind::cwe:
    case TaskKind::story_retrieval:
      for (const auto& l : detail::nonempty_lines(block)) out.push_back(detail::strip_number(l));
      break;
    case TaskKind::vt:
      out = detail::split_any(block, " \t\n,");
      break;
    case TaskKind::story_filtering:
      for (auto& p : detail::split_any(block, ",\n ")) {
        std::string digits;
        for (char c : p)
          if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
        if (!digits.empty()) out.push_back(std::to_string(std::stoull(digits)));
      }
      break;
    case TaskKind::story_multihop:
    case TaskKind::qa:
      out.push_back(trim(block));
      break;
  }
  return out;
}

struct SampleScore {
  double score = 0;
  bool parse_ok = false;
};

/// Scores a raw model response against a sample. Unparsable responses score 0.
inline SampleScore score_response(const taskgen::TaskSample& sample, std::string_view response) {
  using taskgen::MetricKind;
  const ParsedResponse parsed = parse_answer(response);
  SampleScore out;
  out.parse_ok = parsed.parse_ok;
  if (!parsed.parse_ok) return out;
  const auto preds = extract_answers(sample.kind, parsed.answer_block);
  switch (sample.metric) {
    case MetricKind::iou:
      out.score = iou(preds, sample.gold);
      break;
    case MetricKind::exact_match:
      if (sample.kind == taskgen::TaskKind::qa || sample.kind == taskgen::TaskKind::story_multihop) {
        // Any accepted answer counts.
        for (const auto& g : sample.gold) out.score = std::max(out.score, exact_match(preds.at(0), g));
      } else {
        out.score = exact_match(preds, sample.gold);
      }
      break;
    case MetricKind::f1:
      for (const auto& g : sample.gold) out.score = std::max(out.score, f1(preds.at(0), g));
      break;
  }
  return out;
}

/// A fully correct response in the requested format.
inline std::string format_gold_answer(const taskgen::TaskSample& s) {
  using taskgen::TaskKind;
  std::string body;
  switch (s.kind) {
    case TaskKind::niah: {
      const std::string& q = s.questions.at(0);
      const auto keys = detail::split_any(q.substr(q.find('\n') + 1), ", ");
      for (std::size_t i = 0; i < s.gold.size(); ++i) {
        if (i) body += '\n';
        body += std::to_string(i + 1) + ". The answer for " + (i < keys.size() ? keys[i] : "?") +
                " is " + s.gold[i] + ".";
      }
      break;
    }
    case TaskKind::cwe:
    case TaskKind::story_retrieval:
      for (std::size_t i = 0; i < s.gold.size(); ++i) {
        if (i) body += '\n';
        body += std::to_string(i + 1) + ". " + s.gold[i];
      }
      break;
    case TaskKind::vt:
      for (std::size_t i = 0; i < s.gold.size(); ++i) body += (i ? " " : "") + s.gold[i];
      break;
    case TaskKind::story_filtering:
      for (std::size_t i = 0; i < s.gold.size(); ++i) body += (i ? ", " : "") + s.gold[i];
      break;
    case TaskKind::story_multihop:
    case TaskKind::qa:
      body = s.gold.at(0);
      break;
  }
  return "<explanation>\nRead from the context.\n</explanation>\n<answer>\n" + body + "\n</answer>";
}

}  // namespace sparse_frontier::eval
