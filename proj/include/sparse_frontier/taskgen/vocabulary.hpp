// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>

#include "sparse_frontier/taskgen/vocabulary_data.hpp"

namespace sparse_frontier::taskgen {

/// Bundled lowercase English word list (nouns, adjectives, verbs).
inline std::span<const std::string_view> english_words() { return detail::kEnglishWords; }

}  // namespace sparse_frontier::taskgen
