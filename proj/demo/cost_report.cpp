// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Attention shares and speedups for the Qwen presets, plus the hybrid
// sliding-window comparison.

#include <cstdio>

#include "sparse_frontier/cost/formulas.hpp"
#include "sparse_frontier/cost/presets.hpp"

namespace cost = sparse_frontier::cost;

int main() {
  std::printf("%-12s %7s %9s %9s %9s %9s\n", "model", "L", "prefill", "speedup", "kv(B=1)", "kv(B=64)");
  for (const auto& m : cost::family_presets("qwen2.5")) {
    for (double L : {16384.0, 65536.0, 131072.0}) {
      const double share = cost::prefill_flops(m.spec(L)).attention_share;
      const double speedup = cost::prefill_attention_speedup(m.spec(L, 1, 0.2));
      const double kv1 = cost::decode_memory(m.spec(L, 1)).attention_share;
      const double kv64 = cost::decode_memory(m.spec(L, 64)).attention_share;
      std::printf("%-12s %7.0f %9.3f %9.2f %9.3f %9.3f\n", m.name.c_str(), L, share, speedup, kv1, kv64);
    }
  }

  std::printf("\nhybrid at 64K, B=8\n");
  for (const char* name : {"qwen2.5-14b", "gemma3-12b"}) {
    const auto spec = cost::find_preset(name).spec(65536, 8);
    std::printf("%-12s prefill %.3f decode %.3f\n", name, cost::prefill_flops(spec).attention_share,
                cost::decode_memory(spec).attention_share);
  }
}
