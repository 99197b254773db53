// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sparse_frontier/core/csv.hpp"
#include "sparse_frontier/cost/formulas.hpp"
#include "sparse_frontier/cost/pareto.hpp"
#include "sparse_frontier/cost/presets.hpp"

namespace sparse_frontier::cost {

struct SweepRow {
  std::string model;
  double L = 0;
  double B = 0;
  double rho = 0;
  double prefill_flops = 0;
  double prefill_attention_share = 0;
  double prefill_flops_speedup = 0;
  double prefill_attention_speedup = 0;
  double decode_elements = 0;
  double decode_kv_share = 0;
  double decode_speedup = 0;
};

inline std::vector<SweepRow> cost_sweep(const std::vector<ModelDims>& models,
                                        const std::vector<double>& lengths,
                                        const std::vector<double>& batches,
                                        const std::vector<double>& densities) {
  std::vector<SweepRow> rows;
  for (const auto& m : models)
    for (double L : lengths)
      for (double B : batches)
        for (double rho : densities) {
          const CostSpec s = m.spec(L, B, rho);
          const auto pre = prefill_flops(s);
          const auto dec = decode_memory(s);
          rows.push_back({m.name, L, B, rho, pre.total, pre.attention_share,
                          prefill_flops_speedup(s), prefill_attention_speedup(s), dec.total,
                          dec.attention_share, decode_speedup(s)});
        }
  return rows;
}

inline CsvTable sweep_csv(const std::vector<SweepRow>& rows) {
  CsvTable t({"model", "L", "B", "rho", "prefill_flops", "prefill_attention_share",
              "prefill_flops_speedup", "prefill_attention_speedup", "decode_elements",
              "decode_kv_share", "decode_speedup"});
  for (const auto& r : rows) {
    t.add_row({r.model, format_number(r.L), format_number(r.B), format_number(r.rho),
               format_number(r.prefill_flops), format_number(r.prefill_attention_share),
               format_number(r.prefill_flops_speedup), format_number(r.prefill_attention_speedup),
               format_number(r.decode_elements), format_number(r.decode_kv_share),
               format_number(r.decode_speedup)});
  }
  return t;
}

inline CsvTable frontier_csv(const std::vector<ParetoPoint>& points) {
  CsvTable t({"model", "sparsity", "cost", "performance"});
  for (const auto& p : points)
    t.add_row({p.model, format_number(p.sparsity), format_number(p.cost), format_number(p.performance)});
  return t;
}

}  // namespace sparse_frontier::cost
