#!/usr/bin/env python3
# Copyright 2026 The Sparse Frontier Lab Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the embedded word list header from data/english_words.txt."""

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
SOURCE = ROOT / "data" / "english_words.txt"
TARGET = ROOT / "include" / "sparse_frontier" / "taskgen" / "vocabulary_data.hpp"

HEADER = """// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Generated by tools/gen_vocabulary.py from data/english_words.txt. Do not edit.
// Word list derived from the wonderwords package (MIT, see data/english_words.LICENSE).

#pragma once

#include <array>
#include <string_view>

namespace sparse_frontier::taskgen::detail {{

inline constexpr std::array<std::string_view, {count}> kEnglishWords = {{
{body}
}};

}}  // namespace sparse_frontier::taskgen::detail
"""


def main() -> None:
    words = [w.strip() for w in SOURCE.read_text().splitlines() if w.strip()]
    if len(set(words)) != len(words):
        raise SystemExit("duplicate words in source list")
    lines, line = [], "   "
    for w in words:
        piece = f' "{w}",'
        if len(line) + len(piece) > 100:
            lines.append(line)
            line = "   "
        line += piece
    lines.append(line)
    TARGET.write_text(HEADER.format(count=len(words), body="\n".join(lines)))


if __name__ == "__main__":
    main()
