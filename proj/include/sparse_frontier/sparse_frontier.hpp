// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Everything except the HTTP adapter, which needs httplib.h
// (include sparse_frontier/harness/remote_adapter.hpp separately).

#include "sparse_frontier/attention/attention.hpp"
#include "sparse_frontier/attention/synthetic.hpp"
#include "sparse_frontier/cost/formulas.hpp"
#include "sparse_frontier/cost/pareto.hpp"
#include "sparse_frontier/cost/presets.hpp"
#include "sparse_frontier/cost/sweep.hpp"
#include "sparse_frontier/eval/metrics.hpp"
#include "sparse_frontier/eval/parse.hpp"
#include "sparse_frontier/eval/score.hpp"
#include "sparse_frontier/eval/stats.hpp"
#include "sparse_frontier/harness/adapter.hpp"
#include "sparse_frontier/harness/analyze.hpp"
#include "sparse_frontier/harness/config.hpp"
#include "sparse_frontier/harness/plan_demo.hpp"
#include "sparse_frontier/harness/records.hpp"
#include "sparse_frontier/harness/runner.hpp"
#include "sparse_frontier/patterns/block_sparse.hpp"
#include "sparse_frontier/patterns/calibration.hpp"
#include "sparse_frontier/patterns/eviction.hpp"
#include "sparse_frontier/patterns/quest.hpp"
#include "sparse_frontier/patterns/sparsity.hpp"
#include "sparse_frontier/patterns/vertical_slash.hpp"
#include "sparse_frontier/taskgen/taskgen.hpp"
