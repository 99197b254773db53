// Copyright 2026 The Sparse Frontier Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one "criterion N: PASS|FAIL" line per criterion
// and exits non-zero when any selected criterion fails.
//
//   acceptance          run all ten
//   acceptance 3 7      run a subset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sparse_frontier/sparse_frontier.hpp"
#include "support/oracles.hpp"

namespace sf = sparse_frontier;
namespace sfc = sparse_frontier::cost;
namespace tg = sparse_frontier::taskgen;
namespace ev = sparse_frontier::eval;
namespace hn = sparse_frontier::harness;

namespace {

/// Collects failed checks and a short summary for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
    return ok;
  }
  bool within(double value, double target, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.4f (target %.3f +- %.3f)", what.c_str(), value, target, tol);
    return expect(std::abs(value - target) <= tol + 1e-12, buf);
  }
  bool in_range(double value, double lo, double hi, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.4f (range [%.3f, %.3f])", what.c_str(), value, lo, hi);
    return expect(value >= lo && value <= hi, buf);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

// Qwen-family mean of a per-model quantity.
double qwen_mean(const std::function<double(const sfc::ModelDims&)>& f) {
  const auto fam = sfc::family_presets("qwen2.5");
  double s = 0;
  for (const auto& m : fam) s += f(m);
  return s / static_cast<double>(fam.size());
}

sf::AttentionInputs synthetic(std::size_t n, std::uint64_t seed, const char* gen, std::size_t hq,
                              std::size_t hkv, std::size_t d) {
  sf::SyntheticSpec spec;
  spec.generator = gen;
  spec.seq_len = n;
  spec.seed = seed;
  spec.num_q_heads = hq;
  spec.num_kv_heads = hkv;
  spec.head_dim = d;
  return sf::make_synthetic_inputs(spec);
}

// ---------------------------------------------------------------- 1 to 4

void prefill_shares(Check& c) {
  const double s16 = qwen_mean([](const auto& m) { return sfc::prefill_flops(m.spec(16384)).attention_share; });
  const double s128 = qwen_mean([](const auto& m) { return sfc::prefill_flops(m.spec(128000)).attention_share; });
  c.within(s16, 0.40, 0.06, "share@16K");
  c.within(s128, 0.80, 0.06, "share@128K");
  c.note("qwen mean attention share " + fmt("%.3f", s16) + " -> " + fmt("%.3f", s128));
}

void prefill_speedups(Check& c) {
  const double targets[] = {1.5, 2.2, 2.8};
  const double lengths[] = {16384, 65536, 128000};
  std::vector<std::string> got;
  for (int i = 0; i < 3; ++i) {
    const double L = lengths[i];
    const double s = qwen_mean([L](const auto& m) { return sfc::prefill_attention_speedup(m.spec(L, 1, 0.2)); });
    c.within(s, targets[i], 0.2, "speedup@" + fmt("%.0f", L));
    got.push_back(fmt("%.2f", s));
  }
  c.note("rho=0.2 speedups " + join(got, "/"));
}

void decode_costs(Check& c) {
  auto kv = [](double L, double B) {
    return qwen_mean([=](const auto& m) { return sfc::decode_memory(m.spec(L, B)).attention_share; });
  };
  c.within(kv(16384, 1), 0.07, 0.05, "kv_share B=1 16K");
  c.within(kv(128000, 1), 0.35, 0.06, "kv_share B=1 128K");
  std::vector<std::string> b64, speed;
  for (double L : {16384.0, 32768.0, 65536.0, 128000.0}) {
    c.in_range(kv(L, 64), 0.80, 0.97, "kv_share B=64 L=" + fmt("%.0f", L));
    const double s = qwen_mean([L](const auto& m) { return sfc::decode_speedup(m.spec(L, 64, 0.2)); });
    c.in_range(s, 2.5, 5.0, "decode speedup B=64 L=" + fmt("%.0f", L));
    b64.push_back(fmt("%.3f", kv(L, 64)));
    speed.push_back(fmt("%.2f", s));
  }
  c.note("B=1 kv " + fmt("%.3f", kv(16384, 1)) + " -> " + fmt("%.3f", kv(128000, 1)) + "; B=64 kv " +
         join(b64, "/") + "; speedups " + join(speed, "/"));
}

void hybrid_costs(Check& c) {
  const auto q = sfc::find_preset("qwen2.5-14b").spec(65536, 8);
  const auto g = sfc::find_preset("gemma3-12b").spec(65536, 8);
  const double qp = sfc::prefill_flops(q).attention_share, gp = sfc::prefill_flops(g).attention_share;
  const double qd = sfc::decode_memory(q).attention_share, gd = sfc::decode_memory(g).attention_share;
  c.within(qp, 0.76, 0.06, "qwen14b prefill");
  c.within(gp, 0.42, 0.06, "gemma12b prefill");
  c.within(qd, 0.79, 0.06, "qwen14b decode");
  c.within(gd, 0.61, 0.06, "gemma12b decode");
  c.note("prefill " + fmt("%.3f", qp) + " vs " + fmt("%.3f", gp) + ", decode " + fmt("%.3f", qd) + " vs " +
         fmt("%.3f", gd));
}

// ---------------------------------------------------------------- 5

void calibration_fidelity(Check& c) {
  const auto& table = sf::builtin_calibration();
  struct Tally {
    std::size_t rows = 0, misses = 0;
    double worst = 0;
  };
  std::map<std::string, Tally> tally;
  double flex_worst = 0;
  for (std::size_t n : {16384u, 32768u, 65536u}) {
    const auto in = synthetic(n, 7, "uniform", 2, 2, 16);
    for (const auto& row : table.rows()) {
      if (row.seq_len != n) continue;
      for (const auto& p : row.points) {
        const double achieved = sf::plan_sparsity(hn::build_plan(row.method, p.params, in)).achieved_sparsity;
        const double dev = std::abs(achieved - p.target_sparsity);
        if (row.method == "flexprefill") {
          flex_worst = std::max(flex_worst, dev);
          continue;
        }
        const double tol = row.method == "block_sparse" ? 0.05 : 0.03;
        auto& t = tally[row.method];
        ++t.rows;
        t.worst = std::max(t.worst, dev);
        if (dev > tol + 1e-12) {
          ++t.misses;
          c.expect(false, row.method + " n=" + std::to_string(n) + " target " + fmt("%.3f", p.target_sparsity) +
                              " achieved " + fmt("%.3f", achieved));
        }
      }
    }
  }
  for (const auto& [m, t] : tally)
    c.note(m + " " + std::to_string(t.rows - t.misses) + "/" + std::to_string(t.rows) + " worst " +
           fmt("%.3f", t.worst));
  c.note("flexprefill (input-dependent, info only) worst " + fmt("%.3f", flex_worst));
}

// ---------------------------------------------------------------- 6

double max_abs_diff(const sf::Tensor3& a, const sf::Tensor3& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

void oracle_equivalence(Check& c) {
  sf::Rng rng(2026);
  double worst_dense = 0, worst_mask = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t hkv = 1 + sf::uniform_index(rng, 3);
    const std::size_t hq = hkv * (1 + sf::uniform_index(rng, 3));
    const std::size_t n = 1 + sf::uniform_index(rng, 64);
    const std::size_t d = 1 + sf::uniform_index(rng, 32);
    const char* gen = sf::synthetic_generators()[static_cast<std::size_t>(t) % 3].c_str();
    const auto in = synthetic(n, 100 + static_cast<std::uint64_t>(t), gen, hq, hkv, d);
    const auto dense = sf::dense_prefill(in).output;
    worst_dense = std::max(worst_dense, max_abs_diff(dense, oracle::naive_attention(in)));
    worst_mask = std::max(worst_mask, max_abs_diff(sf::masked_attention(in, sf::CellMask::full_causal(hq, n)).output, dense));
  }
  c.expect(worst_dense <= 1e-6, "dense vs naive " + fmt("%.2e", worst_dense));
  c.expect(worst_mask <= 1e-7, "full mask vs dense " + fmt("%.2e", worst_mask));
  c.note("max |dense - naive| " + fmt("%.1e", worst_dense) + ", max |full mask - dense| " + fmt("%.1e", worst_mask));
}

// ---------------------------------------------------------------- 7

void selection_properties(Check& c) {
  const std::size_t n = 512;
  using Builder = std::function<sf::SparsePlan(const sf::AttentionInputs&, std::size_t)>;
  const sf::VerticalSlashOptions vs;
  const sf::EvictionOptions eo;
  const std::vector<std::pair<std::string, std::pair<std::vector<std::size_t>, Builder>>> sweeps = {
      {"k_v", {{4, 8, 16, 32, 64, 128, 256, 512},
               [&](const auto& in, std::size_t k) { return sf::SparsePlan(sf::build_vertical_slash(in, k, 64, vs)); }}},
      {"k_s", {{64, 80, 96, 128, 192, 256, 384, 512},
               [&](const auto& in, std::size_t k) { return sf::SparsePlan(sf::build_vertical_slash(in, 8, k, vs)); }}},
      {"top_k_blocks", {{2, 3, 4, 6, 8, 16, 24, 32},
                        [](const auto& in, std::size_t k) { return sf::SparsePlan(sf::build_block_sparse(in, k, 16)); }}},
      {"token_capacity(snapkv)", {{132, 140, 160, 200, 256, 320, 400, 512},
                                  [&](const auto& in, std::size_t k) { return sf::SparsePlan(sf::snapkv_compress(in, k, eo)); }}},
      {"token_capacity(ada)", {{132, 140, 160, 200, 256, 320, 400, 512},
                               [&](const auto& in, std::size_t k) {
                                 return sf::SparsePlan(sf::ada_snapkv_compress(in, k, 0.2, eo));
                               }}},
      {"token_budget", {{16, 32, 48, 64, 128, 256, 384, 512},
                        [](const auto& in, std::size_t k) { return sf::SparsePlan(sf::build_quest(in, k, 16)); }}}};
  std::size_t curves = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto in = synthetic(n, 300 + seed, seed % 2 ? "clustered" : "planted_needle", 4, 2, 16);
    for (const auto& [name, sweep] : sweeps) {
      double prev = -1;
      for (std::size_t k : sweep.first) {
        const double r = sf::attention_recall(sweep.second(in, k), in, n);
        c.expect(r + 1e-12 >= prev, "recall drops in " + name + " at " + std::to_string(k) + " seed " +
                                        std::to_string(seed));
        prev = r;
      }
      ++curves;
    }
  }
  c.note(std::to_string(curves) + " recall curves monotone");

  // Quest bound: every page score bounds q.k for each key in the page, at every position.
  std::size_t checked = 0;
  const auto qin = synthetic(256, 11, "uniform", 4, 2, 16);
  for (std::size_t pos = 0; pos < 256; ++pos) {
    const auto reps = sf::quest_index(qin, 16, pos + 1);
    for (std::size_t h = 0; h < qin.num_q_heads(); ++h) {
      const auto q = qin.queries.row(h, pos);
      const std::size_t g = qin.group_map[h];
      for (std::size_t j = 0; j <= pos; ++j, ++checked)
        if (sf::quest_page_score(q, reps[g], j / 16) + 1e-12 < sf::dot(q, qin.keys.row(g, j)))
          c.expect(false, "quest bound violated at pos " + std::to_string(pos));
    }
  }
  c.note(std::to_string(checked) + " quest bound pairs");

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto in = synthetic(n, 500 + seed, "clustered", 4, 2, 16);
    sf::FlexPrefillConfig cfg;
    cfg.alpha = 0;
    cfg.fallback_k_v = 24 + 8 * seed;
    cfg.fallback_k_s = 96 + 16 * seed;
    c.expect(sf::build_flexprefill(in, cfg) == sf::build_vertical_slash(in, cfg.fallback_k_v, cfg.fallback_k_s),
             "flexprefill alpha=0 differs from vertical_slash, seed " + std::to_string(seed));
    const auto snap = sf::snapkv_compress(in, 200, eo);
    const auto ada = sf::ada_snapkv_compress(in, 200, 1.0, eo);
    for (std::size_t g = 0; g < snap.kept.size(); ++g)
      c.expect(snap.kept[g].size() == ada.kept[g].size(), "ada floor 1.0 count differs, seed " + std::to_string(seed));
  }
}

// ---------------------------------------------------------------- 8

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<tg::QaDocument> toy_documents(std::size_t n) {
  std::vector<tg::QaDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    tg::QaDocument d;
    d.title = "doc" + std::to_string(i);
    d.text = "Record " + std::to_string(i) + " describes the harbor of town" + std::to_string(i) +
             ". The keeper there was named keeper" + std::to_string(i) + ". ";
    for (std::size_t r = 0; r < 3 + i % 17; ++r) d.text += "Ships came and went with the tide. ";
    d.question = "Who kept the harbor of town" + std::to_string(i) + "?";
    d.answers = {"keeper" + std::to_string(i)};
    docs.push_back(d);
  }
  return docs;
}

void taskgen_oracles(Check& c) {
  const std::size_t target = 4096;
  std::map<std::string, std::size_t> ok;
  const auto docs = toy_documents(120);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::string tag = " seed " + std::to_string(seed);
    {
      const auto s = tg::generate(tg::TaskKind::niah, seed, target);
      ok["niah"] += c.expect(oracle::niah_scan(s.context, s.questions.at(0)) == s.gold, "niah" + tag);
    }
    {
      const auto s = tg::generate(tg::TaskKind::cwe, seed, target);
      const auto h = oracle::cwe_histogram(s.context);
      const auto common = oracle::words_with_count(h, 30);
      const auto rare = oracle::words_with_count(h, 3);
      ok["cwe"] += c.expect(sorted(common) == sorted(s.gold) && common.size() == 10 &&
                                common.size() + rare.size() == h.size(),
                            "cwe" + tag);
    }
    {
      const auto s = tg::generate(tg::TaskKind::vt, seed, target);
      const auto& q = s.questions.at(0);
      const std::uint64_t value = std::stoull(q.substr(q.find("value ") + 6));
      ok["vt"] += c.expect(oracle::vt_resolve(s.context, value) == sorted(s.gold), "vt" + tag);
    }
    for (auto kind : {tg::TaskKind::story_retrieval, tg::TaskKind::story_filtering, tg::TaskKind::story_multihop}) {
      const auto s = tg::generate(kind, seed, target);
      auto got = oracle::story_answers(s);
      bool pass;
      if (kind == tg::TaskKind::story_filtering) {
        const auto facts = oracle::parse_story(s.context);
        const auto k = static_cast<std::size_t>(std::count_if(facts.begin(), facts.end(),
                                                              [](const auto& f) { return !f.acquired; }));
        pass = sorted(got) == sorted(s.gold) && k == 3;
      } else {
        pass = got == s.gold;
      }
      ok[std::string(tg::to_string(kind))] += c.expect(pass, std::string(tg::to_string(kind)) + tag);
    }
    {
      const std::size_t idx = static_cast<std::size_t>(seed) % docs.size();
      const auto s = tg::assemble_qa(docs, idx, 2048, seed);
      const auto hits = oracle::documents_containing(s.context, docs[idx].answers[0] + ".");
      ok["qa"] += c.expect(hits.size() == 1 &&
                               s.questions[0].rfind("Question about document " + std::to_string(hits[0]) + ":", 0) == 0,
                           "qa" + tag);
    }
  }
  std::vector<std::string> parts;
  for (const auto& [k, v] : ok) parts.push_back(k + " " + std::to_string(v) + "/100");
  c.note(join(parts, ", "));
}

// ---------------------------------------------------------------- 9

void metric_suite(Check& c) {
  c.within(ev::f1("the red wooden box", "wooden box lid"), 2.0 / 3, 1e-12, "f1 hand case");
  c.within(ev::iou({"1", "2", "3", "4", "5"}, {"2", "3", "4", "5", "6"}), 4.0 / 6, 1e-12, "iou hand case");
  c.expect(ev::exact_match("The Bronze Shield.", "bronze shield") == 1.0, "exact match canonicalization");
  c.expect(ev::exact_match("bronze shields", "bronze shield") == 0.0, "exact match rejects plural");
  c.expect(ev::parse_answer("<answer>a</answer> then <answer> b </answer>").answer_block == "b", "last answer wins");
  c.expect(!ev::parse_answer("no tags").parse_ok, "missing tags fail to parse");
  c.within(ev::relative_error(0.8, 0.6), 0.25, 1e-12, "relative error");
  c.within(ev::interpolate(ev::SparsityCurve({{0.0, 0.9}, {0.5, 0.8}, {0.8, 0.5}}), 0.6), 0.7, 1e-12,
           "interpolation");

  std::vector<double> worst(900);
  for (std::size_t i = 0; i < worst.size(); ++i) worst[i] = i % 2 ? 1.0 : 0.0;
  const double se = ev::aggregate(worst).std_error;
  c.within(se, 0.5 / std::sqrt(900.0), 5e-4, "max SE n=900");
  c.expect(se <= 0.5 / std::sqrt(899.0) + 1e-12, "SE within sample bound");
  sf::Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(900);
    for (auto& x : v) x = sf::uniform01(rng);
    if (!c.expect(ev::aggregate(v).std_error <= 0.5 / std::sqrt(899.0) + 1e-12, "SE bound on random scores")) break;
  }
  c.note("F1 2/3, IoU 4/6, worst-case SE " + fmt("%.4f", se));
}

// ---------------------------------------------------------------- 10

void harness_laws(Check& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sflab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream docs(dir / "docs.json");
    docs << nlohmann::json(toy_documents(60)).dump();
  }
  auto config = hn::config_from_json(nlohmann::json::parse(R"({
    "tasks": ["niah", "cwe", "vt", "story_retrieval", "story_filtering", "story_multihop"],
    "methods": ["vertical_slash", "flexprefill", "block_sparse", "snapkv", "ada_snapkv", "quest"],
    "sparsity_levels": [0, 0.5, 0.9],
    "seq_lengths": [4096],
    "samples_per_config": 2,
    "seed": 1
  })"));
  hn::TaskEntry qa;
  qa.kind = tg::TaskKind::qa;
  qa.params = {{"documents", (dir / "docs.json").string()}};
  config.tasks.push_back(qa);

  for (auto mode : {hn::MockMode::echo, hn::MockMode::empty}) {
    const std::string path = (dir / (std::string(hn::detail::mock_name(mode)) + ".jsonl")).string();
    hn::MockAdapter adapter(mode);
    const auto stats = hn::run_suite(config, adapter, path);
    const double want = mode == hn::MockMode::echo ? 1.0 : 0.0;
    c.expect(stats.failed == 0, std::string(hn::detail::mock_name(mode)) + " run had " + std::to_string(stats.failed) + " failures");
    std::size_t bad = 0;
    for (const auto& r : hn::read_records(path)) bad += !r.ok() || r.score != want;
    c.expect(bad == 0, std::to_string(bad) + " " + hn::detail::mock_name(mode) + " records off " + fmt("%.0f", want));
    for (const auto& row : hn::analyze(hn::read_records(path)).summary.rows())
      c.expect(std::stod(row[6]) == want, "summary mean " + row[6] + " for " + row[2] + "/" + row[3]);
    if (mode == hn::MockMode::echo) {
      c.note(std::to_string(stats.completed) + " echo records at 1.0");
      hn::MockAdapter again;
      const auto resumed = hn::run_suite(config, again, path);
      c.expect(again.calls() == 0, "resume issued " + std::to_string(again.calls()) + " calls");
      c.expect(resumed.skipped == resumed.planned, "resume skipped only part of the plan");
    }
  }

  sf::Rng rng(99);
  std::vector<sfc::ParetoPoint> pts;
  for (int i = 0; i < 1000; ++i)
    pts.push_back({1 + static_cast<double>(sf::uniform_index(rng, 200)), std::round(sf::uniform01(rng) * 100) / 100,
                   "m" + std::to_string(i % 7), 0.1 * static_cast<double>(i % 10), "quest"});
  const auto flags = hn::pareto_flags(pts);
  const auto want = oracle::pareto_oracle(pts);
  c.expect(flags == want, "pareto flags differ from the O(n^2) oracle");
  c.note("pareto on 1000 points: " + std::to_string(std::count(want.begin(), want.end(), true)) + " on frontier");
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  void (*run)(Check&);
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "cost model prefill shares", 1, prefill_shares},
      {2, "cost model prefill speedups", 1, prefill_speedups},
      {3, "cost model decode", 1, decode_costs},
      {4, "hybrid cost", 1, hybrid_costs},
      {5, "calibration fidelity", 300, calibration_fidelity},
      {6, "oracle equivalence", 60, oracle_equivalence},
      {7, "selection properties", 600, selection_properties},
      {8, "taskgen oracles", 300, taskgen_oracles},
      {9, "metric unit suite", 1, metric_suite},
      {10, "harness laws", 120, harness_laws},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& cr : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), cr.id) == selected.end()) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.expect(secs <= cr.budget_s, "runtime " + fmt("%.2f", secs) + " s over budget " + fmt("%.0f", cr.budget_s) + " s");
    const bool pass = check.failures.empty();
    failed += !pass;
    std::printf("criterion %d: %s %s [%.2f s] %s\n", cr.id, pass ? "PASS" : "FAIL", cr.name, secs,
                join(check.notes, "; ").c_str());
    const std::size_t shown = std::min<std::size_t>(check.failures.size(), 12);
    for (std::size_t i = 0; i < shown; ++i) std::printf("    - %s\n", check.failures[i].c_str());
    if (check.failures.size() > shown) std::printf("    ... %zu more\n", check.failures.size() - shown);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
