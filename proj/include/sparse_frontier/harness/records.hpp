// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparse_frontier/core/csv.hpp"
#include "sparse_frontier/core/errors.hpp"

namespace sparse_frontier::harness {

/// Identifies one (configuration, sample) pair within a suite.
struct RecordKey {
  std::string model;
  std::size_t seq_len = 0;
  std::string task;
  std::string method;
  double sparsity = 0;
  std::size_t sample_index = 0;

  auto tie() const { return std::tie(model, seq_len, task, method, sparsity, sample_index); }
  friend bool operator<(const RecordKey& a, const RecordKey& b) { return a.tie() < b.tie(); }
  friend bool operator==(const RecordKey& a, const RecordKey& b) { return a.tie() == b.tie(); }
};

struct RunRecord {
  std::string fingerprint;
  RecordKey key;
  std::string sample_id;
  std::string status = "ok";  // ok | failed
  std::string response;
  std::string parsed_answer;
  bool parse_ok = false;
  double score = 0;
  std::string error;
  double elapsed_ms = 0;  // timing metadata, ignored by analysis

  bool ok() const { return status == "ok"; }
};

inline void to_json(nlohmann::json& j, const RunRecord& r) {
  j = {{"fingerprint", r.fingerprint},
       {"model", r.key.model},
       {"seq_len", r.key.seq_len},
       {"task", r.key.task},
       {"method", r.key.method},
       {"sparsity", r.key.sparsity},
       {"sample_index", r.key.sample_index},
       {"sample_id", r.sample_id},
       {"status", r.status},
       {"response", r.response},
       {"parsed_answer", r.parsed_answer},
       {"parse_ok", r.parse_ok},
       {"score", r.score},
       {"error", r.error},
       {"elapsed_ms", r.elapsed_ms}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
  j.at("fingerprint").get_to(r.fingerprint);
  j.at("model").get_to(r.key.model);
  j.at("seq_len").get_to(r.key.seq_len);
  j.at("task").get_to(r.key.task);
  j.at("method").get_to(r.key.method);
  j.at("sparsity").get_to(r.key.sparsity);
  j.at("sample_index").get_to(r.key.sample_index);
  j.at("sample_id").get_to(r.sample_id);
  j.at("status").get_to(r.status);
  r.response = j.value("response", "");
  r.parsed_answer = j.value("parsed_answer", "");
  r.parse_ok = j.value("parse_ok", false);
  r.score = j.value("score", 0.0);
  r.error = j.value("error", "");
  r.elapsed_ms = j.value("elapsed_ms", 0.0);
}

inline std::string record_line(const RunRecord& r) { return nlohmann::json(r).dump(); }

/// Reads a JSONL results file; a missing file yields no records. A truncated
/// final line (from an interrupted write) is ignored.
inline std::vector<RunRecord> read_records(const std::string& path) {
  std::vector<RunRecord> out;
  std::ifstream in(path);
  if (!in.good()) return out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<RunRecord>());
    } catch (const nlohmann::json::exception& e) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed record: " + e.what());
    }
  }
  return out;
}

/// Latest record per key; later lines supersede earlier ones.
inline std::map<RecordKey, RunRecord> latest_records(const std::vector<RunRecord>& records) {
  std::map<RecordKey, RunRecord> out;
  for (const auto& r : records) out[r.key] = r;
  return out;
}

/// Drops a partial last line left by an interrupted write.
inline void truncate_partial_line(const std::string& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.back() == '\n') return;
  const auto last = content.find_last_of('\n');
  in.close();
  std::filesystem::resize_file(path, last == std::string::npos ? 0 : last + 1);
}

/// Single appending writer.
class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path) : out_((truncate_partial_line(path), path), std::ios::app) {
    sparse_frontier::detail::require<Error>(out_.good(), "cannot open results file " + path);
  }

  void append(const RunRecord& r) {
    out_ << record_line(r) << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

}  // namespace sparse_frontier::harness
