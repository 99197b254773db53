// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of them call into the code they check.

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sparse_frontier/attention/inputs.hpp"
#include "sparse_frontier/cost/pareto.hpp"
#include "sparse_frontier/taskgen/story.hpp"

namespace oracle {

/// Causal softmax attention with explicit loops and a max-shifted exponent.
inline sparse_frontier::Tensor3 naive_attention(const sparse_frontier::AttentionInputs& in) {
  const std::size_t H = in.queries.heads(), n = in.queries.rows(), d = in.queries.cols();
  const std::size_t group = H / in.keys.heads();
  sparse_frontier::Tensor3 out(H, n, d);
  for (std::size_t h = 0; h < H; ++h) {
    const std::size_t g = h / group;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> logits(i + 1);
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0;
        for (std::size_t c = 0; c < d; ++c) s += in.queries(h, i, c) * in.keys(g, j, c);
        logits[j] = s / std::sqrt(static_cast<double>(d));
      }
      const double m = *std::max_element(logits.begin(), logits.end());
      double z = 0;
      for (double& x : logits) z += (x = std::exp(x - m));
      for (std::size_t j = 0; j <= i; ++j)
        for (std::size_t c = 0; c < d; ++c) out(h, i, c) += logits[j] / z * in.values(g, j, c);
    }
  }
  return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

/// Union-find over "VAR A = VAR B" edges; names in the component that holds
/// the literal `value`.
inline std::vector<std::string> vt_resolve(const std::string& context, std::uint64_t value) {
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    if (!parent.count(x)) parent[x] = x;
    if (parent[x] == x) return x;
    return parent[x] = find(parent[x]);
  };
  std::vector<std::string> roots_with_value;
  const std::regex copy(R"(^VAR ([A-Z]+) = VAR ([A-Z]+)$)");
  const std::regex literal(R"(^VAR ([A-Z]+) = ([0-9]+)$)");
  std::vector<std::string> anchored;
  for (const auto& line : lines_of(context)) {
    std::smatch m;
    if (std::regex_match(line, m, copy)) {
      parent[find(m[1])] = find(m[2]);
    } else if (std::regex_match(line, m, literal)) {
      find(m[1]);
      if (std::stoull(m[2]) == value) anchored.push_back(m[1]);
    }
  }
  std::set<std::string> roots;
  for (const auto& a : anchored) roots.insert(find(a));
  std::vector<std::string> out;
  for (const auto& [name, _] : parent)
    if (roots.count(find(name))) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

/// Word frequencies of a numbered "i. word" list.
inline std::map<std::string, std::size_t> cwe_histogram(const std::string& context) {
  std::map<std::string, std::size_t> counts;
  for (const auto& line : lines_of(context)) {
    const auto dot = line.find(". ");
    if (dot != std::string::npos) ++counts[line.substr(dot + 2)];
  }
  return counts;
}

/// Words occurring exactly `times` times, sorted.
inline std::vector<std::string> words_with_count(const std::map<std::string, std::size_t>& h,
                                                 std::size_t times) {
  std::vector<std::string> out;
  for (const auto& [w, c] : h)
    if (c == times) out.push_back(w);
  return out;
}

/// Looks up each queried key in "The value for K is: V." lines.
inline std::vector<std::string> niah_scan(const std::string& context, const std::string& question) {
  std::map<std::string, std::string> table;
  const std::regex kv(R"(^The value for (\S+) is: (\S+)\.$)");
  for (const auto& line : lines_of(context)) {
    std::smatch m;
    if (std::regex_match(line, m, kv)) table[m[1]] = m[2];
  }
  std::vector<std::string> out;
  const std::string keys = question.substr(question.find('\n') + 1);
  std::istringstream is(keys);
  for (std::string k; std::getline(is, k, ',');) {
    k.erase(0, k.find_first_not_of(' '));
    out.push_back(table.count(k) ? table[k] : "");
  }
  return out;
}

struct ChapterFacts {
  std::set<std::string> locations;
  std::set<std::string> characters;
  std::vector<std::string> items;  // in order of appearance
  std::optional<std::string> acquired;
};

inline bool has_word(const std::string& text, std::string_view word) {
  for (std::size_t pos = text.find(word); pos != std::string::npos; pos = text.find(word, pos + 1)) {
    const bool left = pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
    const std::size_t end = pos + word.size();
    const bool right = end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
    if (left && right) return true;
  }
  return false;
}

/// Reads chapters back from rendered text using only the exported name
/// pools. An item is acquired in the first chapter that mentions it.
inline std::vector<ChapterFacts> parse_story(const std::string& context) {
  namespace tg = sparse_frontier::taskgen;
  std::vector<std::string> bodies;
  const std::regex header(R"(Chapter ([0-9]+):\n)");
  auto it = std::sregex_iterator(context.begin(), context.end(), header);
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (; it != std::sregex_iterator(); ++it)
    spans.push_back({static_cast<std::size_t>(it->position()), static_cast<std::size_t>(it->length())});
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::size_t start = spans[i].first + spans[i].second;
    const std::size_t end = i + 1 < spans.size() ? spans[i + 1].first : context.size();
    bodies.push_back(context.substr(start, end - start));
  }
  std::set<std::string> seen_items;
  std::vector<ChapterFacts> out;
  for (const auto& body : bodies) {
    ChapterFacts f;
    for (auto l : tg::story_locations())
      if (has_word(body, l)) f.locations.insert(std::string(l));
    for (auto c : tg::story_characters())
      if (has_word(body, c)) f.characters.insert(std::string(c));
    const std::set<std::string_view> adjectives(tg::story_item_adjectives().begin(),
                                                tg::story_item_adjectives().end());
    const std::set<std::string_view> materials(tg::story_item_materials().begin(),
                                               tg::story_item_materials().end());
    std::vector<std::pair<std::size_t, std::string>> found;
    for (auto o : tg::story_item_objects()) {
      for (auto pos = body.find(o); pos != std::string::npos; pos = body.find(o, pos + 1)) {
        const std::size_t end = pos + o.size();
        if (end < body.size() && std::isalpha(static_cast<unsigned char>(body[end]))) continue;
        // two preceding words: "<adjective> <material> "
        if (pos < 2 || body[pos - 1] != ' ') continue;
        const auto m0 = body.rfind(' ', pos - 2);
        if (m0 == std::string::npos) continue;
        const auto a0 = body.rfind(' ', m0 - 1);
        const std::size_t a_start = a0 == std::string::npos ? 0 : a0 + 1;
        const std::string mat = body.substr(m0 + 1, pos - 1 - (m0 + 1));
        const std::string adj = body.substr(a_start, m0 - a_start);
        if (adjectives.count(adj) && materials.count(mat))
          found.push_back({a_start, adj + " " + mat + " " + std::string(o)});
      }
    }
    std::sort(found.begin(), found.end());
    for (const auto& [_, item] : found) {
      f.items.push_back(item);
      if (!seen_items.count(item) && !f.acquired) f.acquired = item;
    }
    for (const auto& item : f.items) seen_items.insert(item);
    out.push_back(std::move(f));
  }
  return out;
}

/// Answers the story questions from parsed chapter facts.
inline std::vector<std::string> story_answers(const sparse_frontier::taskgen::TaskSample& s) {
  using sparse_frontier::taskgen::TaskKind;
  const auto facts = parse_story(s.context);
  std::vector<std::string> out;
  auto only = [](const std::set<std::string>& v) { return v.size() == 1 ? *v.begin() : std::string("?"); };
  if (s.kind == TaskKind::story_retrieval) {
    const std::regex q(R"(^In Chapter ([0-9]+), which (character|specific item|specific location))");
    for (const auto& question : s.questions) {
      std::smatch m;
      if (!std::regex_search(question, m, q)) {
        out.push_back("?");
        continue;
      }
      const auto& f = facts.at(std::stoul(m[1]) - 1);
      const std::string what = m[2];
      if (what == "character") out.push_back(only(f.characters));
      else if (what == "specific item") out.push_back(f.acquired.value_or("?"));
      else out.push_back(only(f.locations));
    }
  } else if (s.kind == TaskKind::story_filtering) {
    for (std::size_t k = 0; k < facts.size(); ++k)
      if (!facts[k].acquired) out.push_back(std::to_string(k + 1));
  } else if (s.kind == TaskKind::story_multihop) {
    const std::string& q = s.questions.at(0);
    const std::string marker = "before acquiring ";
    const std::string target = q.substr(q.find(marker) + marker.size(),
                                        q.size() - q.find(marker) - marker.size() - 1);
    std::optional<std::string> last;
    for (const auto& f : facts) {
      if (f.acquired == target) break;
      if (f.acquired) last = f.acquired;
    }
    out.push_back(last.value_or("?"));
  }
  return out;
}

/// Number of the "Document N:" block whose text contains `needle`.
inline std::vector<std::size_t> documents_containing(const std::string& context, const std::string& needle) {
  std::vector<std::size_t> out;
  const std::regex header(R"((^|\n\n)Document ([0-9]+):\n)");
  std::vector<std::pair<std::size_t, std::size_t>> heads;  // (number, body start)
  std::vector<std::size_t> starts;
  for (auto it = std::sregex_iterator(context.begin(), context.end(), header); it != std::sregex_iterator(); ++it) {
    heads.push_back({std::stoul((*it)[2]), static_cast<std::size_t>(it->position() + it->length())});
    starts.push_back(static_cast<std::size_t>(it->position()));
  }
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const std::size_t end = i + 1 < heads.size() ? starts[i + 1] : context.size();
    if (context.substr(heads[i].second, end - heads[i].second).find(needle) != std::string::npos)
      out.push_back(heads[i].first);
  }
  return out;
}

/// O(n^2) non-dominated set.
inline std::vector<bool> pareto_oracle(const std::vector<sparse_frontier::cost::ParetoPoint>& pts) {
  std::vector<bool> keep(pts.size(), true);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto& a = pts[j];
      const auto& b = pts[i];
      if (a.cost <= b.cost && a.performance >= b.performance &&
          (a.cost < b.cost || a.performance > b.performance))
        keep[i] = false;
    }
  return keep;
}

}  // namespace oracle
