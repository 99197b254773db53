// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace sparse_frontier::eval {

struct ParsedResponse {
  std::string explanation;
  std::string answer_block;
  bool parse_ok = false;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

namespace detail {

/// Inner text of the last complete <tag>...</tag> block ending at or before `limit`.
inline bool last_block(std::string_view text, std::string_view tag, std::size_t limit,
                       std::string& inner, std::size_t* start = nullptr) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  if (limit < close.size()) return false;
  const std::size_t c = text.rfind(close, limit - close.size());
  if (c == std::string_view::npos) return false;
  const std::size_t o = text.rfind(open, c);
  if (o == std::string_view::npos) return false;
  inner = trim(text.substr(o + open.size(), c - o - open.size()));
  if (start) *start = o;
  return true;
}

}  // namespace detail

/// The last well-formed answer block wins; responses without one fail to parse.
inline ParsedResponse parse_answer(std::string_view response) {
  ParsedResponse r;
  std::size_t answer_start = response.size();
  r.parse_ok = detail::last_block(response, "answer", response.size(), r.answer_block, &answer_start);
  detail::last_block(response, "explanation", r.parse_ok ? answer_start : response.size(),
                     r.explanation);
  return r;
}

}  // namespace sparse_frontier::eval
