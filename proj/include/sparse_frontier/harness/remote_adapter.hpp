// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Text-completion client over HTTP. Requires the vendored httplib.h; define
// CPPHTTPLIB_OPENSSL_SUPPORT before inclusion for https endpoints.

#include <cstdlib>
#include <iostream>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sparse_frontier/harness/adapter.hpp"

namespace sparse_frontier::harness {

struct RemoteSettings {
  std::string endpoint;  // e.g. http://localhost:8000/v1/completions
  std::string api_key;
  std::string model;
  int timeout_seconds = 600;

  /// Reads SFLAB_ENDPOINT, SFLAB_API_KEY and SFLAB_MODEL.
  static RemoteSettings from_env() {
    auto get = [](const char* name) {
      const char* v = std::getenv(name);
      return v ? std::string(v) : std::string();
    };
    RemoteSettings s{get("SFLAB_ENDPOINT"), get("SFLAB_API_KEY"), get("SFLAB_MODEL")};
    if (s.endpoint.empty()) throw ConfigError("SFLAB_ENDPOINT is not set");
    return s;
  }
};

namespace detail {

struct SplitUrl {
  std::string origin;
  std::string path;
};

inline SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint must include a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace detail

/// Extracts the completion from `{"text": ...}` or `{"choices": [{"text": ...}]}`.
inline std::string parse_completion(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(std::string("completion response is not JSON: ") + e.what());
  }
  if (j.contains("text") && j["text"].is_string()) return j["text"].get<std::string>();
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& c = j["choices"][0];
    if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
  }
  throw AdapterError("completion response has no text field");
}

class RemoteAdapter : public ModelAdapter {
 public:
  explicit RemoteAdapter(RemoteSettings settings, std::ostream* warn = &std::cerr)
      : settings_(std::move(settings)), url_(detail::split_url(settings_.endpoint)) {
    if (warn)
      *warn << "warning: remote adapter in use; accuracy depends on the served model and "
               "sparse plans are not injected\n";
  }

  std::string generate(const GenerationRequest& r) override {
    httplib::Client cli(url_.origin);
    cli.set_read_timeout(settings_.timeout_seconds, 0);
    cli.set_write_timeout(settings_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!settings_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + settings_.api_key);
    const nlohmann::json body = {{"model", settings_.model},
                                 {"prompt", r.prompt},
                                 {"max_tokens", r.max_new_tokens},
                                 {"temperature", 0}};
    auto res = cli.Post(url_.path, headers, body.dump(), "application/json");
    if (!res) throw AdapterError("request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw AdapterError("endpoint returned HTTP " + std::to_string(res->status));
    return parse_completion(res->body);
  }

  bool supports_plan_injection() const override { return false; }
  std::string name() const override { return "remote"; }

 private:
  RemoteSettings settings_;
  detail::SplitUrl url_;
};

}  // namespace sparse_frontier::harness
