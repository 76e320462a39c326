/* Copyright 2026 The memplan Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. `--only <name>` runs a single criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "memplan/errors.h"
#include "memplan/estimator.h"
#include "memplan/model_ingest.h"
#include "memplan/planner.h"
#include "oracle.h"
#include "test_util.h"

namespace memplan {
namespace {

using oracle::u128;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure only; later ones add nothing useful.
  void Fail(std::string why) {
    if (pass) detail = std::move(why);
    pass = false;
  }
};

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One randomized estimator case: profile, precision, chunk, page, run, GPUs.
struct RandomCase {
  ModelProfile model;
  PrecisionSpec prec;
  ChunkConfig chunk;
  HardwareProfile hw;
  RunConfig run;
};

RandomCase MakeRandomCase(std::mt19937_64& rng) {
  RandomCase c;
  c.model = testing_util::RandomProfile(rng);
  c.prec = testing_util::RandomPrecision(rng);
  c.chunk.chunk_size = 1 + rng() % (1 << 22);
  c.hw.gpu_n = std::array<std::uint32_t, 5>{1, 2, 4, 6, 8}[rng() % 5];
  c.hw.cu_p = Bytes{1} << (12 + rng() % 11);
  c.hw.m_base = rng() % (Bytes{1} << 30);
  c.hw.m_total = Bytes{1} << 40;
  c.run.batch_size = 1 + rng() % 256;
  c.run.seq_len = 2 + rng() % 2048;
  return c;
}

oracle::Inputs ToInputs(const RandomCase& c) {
  return {&c.model, c.chunk.chunk_size, c.prec, c.run.batch_size,
          c.run.seq_len, c.hw};
}

// Every hybrid factorization of gpu_n, plus tp_n itself for TP.
std::vector<std::uint32_t> TpDegrees(std::uint32_t gpu_n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t tp = 2; tp <= gpu_n / 2; ++tp) {
    if (gpu_n % tp == 0) out.push_back(tp);
  }
  return out;
}

Outcome FormulaOracle() {
  Outcome o;
  std::mt19937_64 rng(20261019);
  const auto start = Clock::now();
  constexpr int kCases = 250;
  int compared = 0;
  for (int i = 0; i < kCases && o.pass; ++i) {
    const RandomCase c = MakeRandomCase(rng);
    const oracle::Inputs in = ToInputs(c);
    auto check = [&](const char* what, u128 got, u128 want) {
      ++compared;
      if (got != want) {
        o.Fail(fmt::format("case {}: {} = {} but oracle = {}", i, what,
                           static_cast<std::uint64_t>(got),
                           static_cast<std::uint64_t>(want)));
      }
    };
    const ParamBytes p = EstimateParams(c.model, c.chunk, c.prec, c.hw);
    check("m_p", p.total, oracle::Mp(in));
    check("m_p16", p.half, oracle::Mp16(in));
    check("m_p32", p.full, oracle::Mp32(in));
    check("m_os", EstimateOptimizerStates(c.model, c.prec, c.hw),
          oracle::Mos(in));
    check("m_out", EstimateOutputs(c.model, c.run, c.prec, c.hw),
          oracle::Mout(in));
    check("m_lm", EstimateLmHead(c.model, c.run, c.prec, c.hw),
          oracle::Mlm(in));
    const StrategySpec tp = StrategySpec::Tp(c.hw.gpu_n);
    check("m_back",
          EstimateTpBackwardBuffer(c.model, c.run, c.prec, tp, c.hw),
          oracle::Mback(in, c.hw.gpu_n));
    check("peak_single",
          EstimatePeakSingle(c.model, c.chunk, c.prec, c.run, c.hw).peak,
          oracle::PeakSingle(in));
    check("peak_adp",
          EstimatePeakAdp(c.model, c.chunk, c.prec, c.run, c.hw).peak,
          oracle::PeakAdp(in));
    check("peak_tp",
          EstimatePeakTp(c.model, c.chunk, c.prec, c.run, tp, c.hw).peak,
          oracle::PeakTp(in));
    for (std::uint32_t t : TpDegrees(c.hw.gpu_n)) {
      const StrategySpec h = StrategySpec::Hybrid(c.hw.gpu_n / t, t);
      check("peak_hybrid",
            EstimatePeakHybrid(c.model, c.chunk, c.prec, c.run, h, c.hw).peak,
            oracle::PeakHybrid(in, t));
    }
  }
  const double secs = SecondsSince(start);
  if (o.pass && secs >= 5.0) o.Fail(fmt::format("took {:.2f} s", secs));
  if (o.pass) {
    o.detail = fmt::format("{} profiles, {} exact comparisons, {:.3f} s",
                           kCases, compared, secs);
  }
  return o;
}

Outcome CollapseIdentities() {
  Outcome o;
  std::mt19937_64 rng(7);
  constexpr int kCases = 250;
  for (int i = 0; i < kCases && o.pass; ++i) {
    RandomCase c = MakeRandomCase(rng);
    c.hw.gpu_n = 1;
    const Bytes single =
        EstimatePeakSingle(c.model, c.chunk, c.prec, c.run, c.hw).peak;
    const Bytes adp = EstimatePeakAdp(c.model, c.chunk, c.prec, c.run, c.hw).peak;
    const Bytes tp = EstimatePeakTp(c.model, c.chunk, c.prec, c.run,
                                    StrategySpec::Tp(1), c.hw)
                         .peak;
    const Bytes back = EstimateTpBackwardBuffer(c.model, c.run, c.prec,
                                                StrategySpec::Tp(1), c.hw);
    if (adp != single || tp != single || back != 0) {
      o.Fail(fmt::format("case {}: single {} adp {} tp {} back {}", i, single,
                         adp, tp, back));
    }
  }
  if (o.pass) o.detail = fmt::format("{} profiles", kCases);
  return o;
}

Outcome OrderingMonotonicity() {
  Outcome o;
  std::mt19937_64 rng(99);
  constexpr int kCases = 60;
  constexpr int kGrid = 20;
  long comparisons = 0;
  for (int i = 0; i < kCases && o.pass; ++i) {
    RandomCase c = MakeRandomCase(rng);
    for (std::uint32_t g : {1u, 2u, 4u, 8u}) {
      c.hw.gpu_n = g;
      std::vector<StrategySpec> strategies = {StrategySpec::Cdp(g),
                                              StrategySpec::Adp(g),
                                              StrategySpec::Tp(g)};
      for (std::uint32_t t : TpDegrees(g)) {
        strategies.push_back(StrategySpec::Hybrid(g / t, t));
      }
      const Bytes single =
          EstimatePeakSingle(c.model, c.chunk, c.prec, c.run, c.hw).peak;
      const Bytes adp =
          EstimatePeakAdp(c.model, c.chunk, c.prec, c.run, c.hw).peak;
      ++comparisons;
      if (adp > single) {
        o.Fail(fmt::format("case {} g={}: adp {} > single {}", i, g, adp,
                           single));
      }
      for (const StrategySpec& s : strategies) {
        Bytes prev_bs = 0;
        Bytes prev_sl = 0;
        for (int k = 0; k < kGrid; ++k) {
          const RunConfig by_bs{1 + static_cast<std::uint64_t>(k) * 13,
                                c.run.seq_len};
          const RunConfig by_sl{c.run.batch_size,
                                2 + static_cast<std::uint64_t>(k) * 97};
          const Bytes a =
              EstimatePeak(s, c.model, c.chunk, c.prec, by_bs, c.hw).peak;
          const Bytes b =
              EstimatePeak(s, c.model, c.chunk, c.prec, by_sl, c.hw).peak;
          comparisons += 2;
          if (a < prev_bs || b < prev_sl) {
            o.Fail(fmt::format("case {} {}: peak decreased at grid point {}",
                               i, ToString(s), k));
          }
          prev_bs = a;
          prev_sl = b;
        }
      }
    }
  }
  if (o.pass) {
    o.detail = fmt::format("{} profiles x gpu_n {{1,2,4,8}}, {} comparisons",
                           kCases, comparisons);
  }
  return o;
}

Outcome Alignment() {
  Outcome o;
  std::mt19937_64 rng(2024);
  constexpr int kCases = 100;
  for (Bytes page : {Bytes{1} << 20, Bytes{1} << 21, Bytes{1} << 22}) {
    for (int i = 0; i < kCases && o.pass; ++i) {
      RandomCase c = MakeRandomCase(rng);
      c.hw.cu_p = page;
      const StrategySpec tp = StrategySpec::Tp(c.hw.gpu_n);
      const ParamBytes p = EstimateParams(c.model, c.chunk, c.prec, c.hw);
      const std::array<std::pair<const char*, Bytes>, 7> values = {{
          {"m_p", p.total},
          {"m_p16", p.half},
          {"m_p32", p.full},
          {"m_os", EstimateOptimizerStates(c.model, c.prec, c.hw)},
          {"m_out", EstimateOutputs(c.model, c.run, c.prec, c.hw)},
          {"m_lm - lm_p",
           EstimateLmHead(c.model, c.run, c.prec, c.hw) - c.model.lm_p},
          {"m_back",
           EstimateTpBackwardBuffer(c.model, c.run, c.prec, tp, c.hw)},
      }};
      for (const auto& [name, v] : values) {
        if (v % page != 0) {
          o.Fail(fmt::format("cu_p {} case {}: {} = {} not aligned", page, i,
                             name, v));
        }
      }
    }
  }
  if (o.pass) o.detail = fmt::format("{} profiles per page size", kCases);
  return o;
}

// Profiles whose parameter states dwarf their per-sample activations, so the
// strategies separate clearly at batch size 1.
ModelProfile HeavyProfile(std::mt19937_64& rng) {
  auto uniform = [&rng](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  ModelProfile m;
  m.dict_n = uniform(100, 5000);
  m.o_n = uniform(16, 256);
  m.l_n = uniform(1, 8);
  m.e_n = uniform(1, 2);
  const std::uint64_t emb = uniform(1'000'000, 20'000'000);
  m.operators.push_back({"embed", OperatorKind::kEmbedding, emb});
  m.embed_p = emb;
  const int layers = static_cast<int>(uniform(1, 6));
  for (int i = 0; i < layers; ++i) {
    const std::uint64_t w = uniform(1'000'000, 30'000'000);
    const std::uint64_t b = uniform(0, 10'000);
    m.operators.push_back({fmt::format("fc{}", i), OperatorKind::kLinear, w});
    m.operators.push_back({fmt::format("ln{}", i), OperatorKind::kLayerNorm, b});
    m.other_p += w + b;
  }
  m.lm_p = m.dict_n * m.o_n * 2;
  return m;
}

enum class Category { kAllFeasible, kCdpInfeasible, kOnlyTp, kNothing };

const char* Name(Category c) {
  switch (c) {
    case Category::kAllFeasible:
      return "all feasible";
    case Category::kCdpInfeasible:
      return "CDP infeasible";
    case Category::kOnlyTp:
      return "only TP feasible";
    case Category::kNothing:
      return "nothing feasible";
  }
  return "";
}

// Compares the planner against the oracle on one fully specified case.
// Returns an empty string on exact agreement.
std::string CompareDecision(const ModelProfile& m, const ChunkConfig& chunk,
                            const PrecisionSpec& prec, std::uint64_t sl,
                            const HardwareProfile& hw, std::uint64_t cap) {
  const oracle::Inputs in{&m, chunk.chunk_size, prec, 1, sl, hw};
  const oracle::OracleDecision want = oracle::Decide(in, cap);
  const DecisionReport got = Decide(m, chunk, prec, sl, hw, {cap, HybridMode::kAll});
  if (got.results.size() != want.strategies.size()) return "strategy count";
  for (std::size_t i = 0; i < want.strategies.size(); ++i) {
    const StrategyResult& r = got.results[i];
    if (r.strategy != want.strategies[i]) return "strategy order";
    if (r.max_batch != want.batches[i]) {
      return fmt::format("{} max batch {} vs oracle {}", ToString(r.strategy),
                         r.max_batch, want.batches[i]);
    }
    // score == doubled / 2  <=>  2 * num == doubled * den
    if (u128{r.score.num()} * 2 != want.doubled_scores[i] * r.score.den()) {
      return fmt::format("{} score {}", ToString(r.strategy),
                         r.score.ToString());
    }
  }
  if (got.chosen != want.chosen || got.chosen_batch != want.chosen_batch) {
    return fmt::format("chose {}@{} vs oracle {}@{}", ToString(got.chosen),
                       got.chosen_batch, ToString(want.chosen),
                       want.chosen_batch);
  }
  return "";
}

Outcome DecisionConformance() {
  Outcome o;
  std::mt19937_64 rng(31337);
  constexpr std::uint64_t kCap = 4096;
  const std::array<Category, 4> categories = {
      Category::kAllFeasible, Category::kCdpInfeasible, Category::kOnlyTp,
      Category::kNothing};
  std::array<int, 4> counts{};
  int built = 0;
  for (int attempt = 0; built < 50 && attempt < 100'000 && o.pass; ++attempt) {
    const Category cat = categories[built % 4];
    const ModelProfile m = HeavyProfile(rng);
    const ChunkConfig chunk{std::max<std::uint64_t>(MaxChunkedOperator(m), 1) +
                            rng() % (1 << 20)};
    const PrecisionSpec prec{};
    const std::uint64_t sl = 2 + rng() % 64;
    HardwareProfile hw;
    hw.gpu_n = std::array<std::uint32_t, 3>{2, 4, 8}[rng() % 3];
    hw.cu_p = Bytes{1} << (12 + rng() % 10);
    hw.m_base = rng() % (Bytes{64} << 20);

    const auto strategies = CandidateStrategies(hw.gpu_n);
    auto peak_at = [&](const StrategySpec& s, std::uint64_t bs) {
      return oracle::Peak({&m, chunk.chunk_size, prec, bs, sl, hw}, s);
    };
    u128 cdp1 = peak_at(strategies[0], 1);
    u128 tp1 = 0;
    u128 min_non_cdp = ~u128{0};
    u128 min_non_tp = ~u128{0};
    u128 max1 = 0;
    for (const auto& s : strategies) {
      const u128 p = peak_at(s, 1);
      max1 = std::max(max1, p);
      if (s.kind == StrategyKind::kTp) tp1 = p;
      if (s.kind != StrategyKind::kCdp) min_non_cdp = std::min(min_non_cdp, p);
      if (s.kind != StrategyKind::kTp) min_non_tp = std::min(min_non_tp, p);
    }
    auto between = [&](u128 lo, u128 hi) {  // uniform in [lo, hi]
      return static_cast<Bytes>(lo + rng() % static_cast<Bytes>(hi - lo + 1));
    };
    switch (cat) {
      case Category::kAllFeasible: {
        u128 hi = 0;
        const std::uint64_t k = 1 + rng() % 32;
        for (const auto& s : strategies) hi = std::max(hi, peak_at(s, k));
        hw.m_total = between(max1, hi);
        break;
      }
      case Category::kCdpInfeasible:
        if (min_non_cdp >= cdp1) continue;
        hw.m_total = between(min_non_cdp, cdp1 - 1);
        break;
      case Category::kOnlyTp:
        if (tp1 >= min_non_tp) continue;
        hw.m_total = between(tp1, min_non_tp - 1);
        break;
      case Category::kNothing:
        hw.m_total = static_cast<Bytes>(std::min(tp1, min_non_tp) - 1);
        break;
    }
    if (hw.m_total <= hw.m_base) continue;
    // Skip cases whose search would run past the cap; the oracle's linear
    // scan is the cost driver here.
    bool censored = false;
    for (const auto& s : strategies) {
      if (peak_at(s, kCap) <= hw.m_total) censored = true;
    }
    if (censored) continue;

    const std::string diff = CompareDecision(m, chunk, prec, sl, hw, kCap);
    if (!diff.empty()) {
      o.Fail(fmt::format("{} case {}: {}", Name(cat), built, diff));
    }
    ++counts[built % 4];
    ++built;
  }
  if (o.pass && built < 50) {
    o.Fail(fmt::format("only {} synthetic cases could be built", built));
  }

  // Named cases on constructed strategy results.
  auto results = [](std::uint32_t gpu_n, std::vector<std::uint64_t> batches) {
    std::vector<StrategyResult> out;
    const auto strategies = CandidateStrategies(gpu_n);
    for (std::size_t i = 0; i < batches.size(); ++i) {
      StrategyResult r;
      r.strategy = strategies[i];
      r.max_batch = batches[i];
      r.score = ScoreStrategy(r.strategy, r.max_batch, gpu_n);
      out.push_back(r);
    }
    return out;
  };
  const DecisionReport equal = SelectStrategy(results(4, {3, 3, 3, 3}));
  if (equal.results[0].score != Score(18, 1) ||
      equal.results[1].score != Score(12, 1) ||
      equal.results[2].score != Score(3, 1) ||
      equal.results[3].score != Score(6, 1) ||
      equal.chosen != StrategySpec::Cdp(4)) {
    o.Fail("18/12/3/6 case did not choose CDP");
  }
  const DecisionReport tie = SelectStrategy(results(4, {0, 1, 4, 1}));
  if (tie.chosen != StrategySpec::Adp(4)) o.Fail("tie case did not choose ADP");
  const DecisionReport offload = SelectStrategy(results(4, {0, 0, 0, 0}));
  if (offload.chosen.kind != StrategyKind::kCpuOffload) {
    o.Fail("nothing-feasible case did not fall back to CPU offload");
  }

  if (o.pass) {
    o.detail = fmt::format(
        "{} cases ({} / {} / {} / {} by category) + 18/12/3/6, tie, offload",
        built, counts[0], counts[1], counts[2], counts[3]);
  }
  return o;
}

Outcome SearchEquivalence() {
  Outcome o;
  std::mt19937_64 rng(4242);
  constexpr int kCases = 250;
  constexpr std::uint64_t kCap = 2048;
  int compared = 0;
  for (int i = 0; i < kCases && o.pass; ++i) {
    RandomCase c = MakeRandomCase(rng);
    c.run.seq_len = 2 + rng() % 256;
    oracle::Inputs in = ToInputs(c);
    in.bs = 1 + rng() % 200;
    const u128 probe = oracle::PeakSingle(in);
    c.hw.m_total = static_cast<Bytes>(probe - rng() % (probe / 4 + 1));
    if (c.hw.m_total <= c.hw.m_base) continue;
    in.hw = c.hw;
    std::vector<StrategySpec> strategies = {StrategySpec::Cdp(c.hw.gpu_n),
                                            StrategySpec::Adp(c.hw.gpu_n),
                                            StrategySpec::Tp(c.hw.gpu_n)};
    for (std::uint32_t t : TpDegrees(c.hw.gpu_n)) {
      strategies.push_back(StrategySpec::Hybrid(c.hw.gpu_n / t, t));
    }
    for (const StrategySpec& s : strategies) {
      const std::uint64_t linear = oracle::LinearScan(in, s, kCap);
      ++compared;
      try {
        const std::uint64_t binary = MaxFeasibleBatch(
            s, c.model, c.chunk, c.prec, c.run.seq_len, c.hw, kCap);
        if (binary != linear) {
          o.Fail(fmt::format("case {} {}: binary {} linear {}", i, ToString(s),
                             binary, linear));
        }
      } catch (const CensoredSearchError&) {
        if (linear != kCap + 1) {
          o.Fail(fmt::format("case {} {}: censored but linear found {}", i,
                             ToString(s), linear));
        }
      }
    }
  }
  if (o.pass) o.detail = fmt::format("{} searches", compared);
  return o;
}

Outcome FixtureStrategyEcho() {
  Outcome o;
  const ModelManifest small = LoadManifest(testing_util::Fixture("opt-1.3b-like"));
  const ModelManifest large = LoadManifest(testing_util::Fixture("opt-2.7b-like"));
  std::vector<std::string> lines;
  for (double factor : {0.75, 1.0, 1.25}) {
    HardwareProfile hw;
    hw.gpu_n = 4;
    hw.m_total = 16384 * kMiB;
    hw.m_base = static_cast<Bytes>(factor * static_cast<double>(kDefaultBaseBytes));
    auto decide = [&](const ModelManifest& m) {
      const ChunkConfig chunk = ChooseChunkSize(m.profile, DefaultChunkCandidates());
      return Decide(m.profile, chunk, m.precision, 512, hw);
    };
    const DecisionReport a = decide(small);
    const DecisionReport b = decide(large);
    const bool a_ok = a.chosen.kind == StrategyKind::kCdp ||
                      a.chosen.kind == StrategyKind::kAdp;
    const bool b_ok = b.chosen.kind == StrategyKind::kTp;
    auto tp_batch = [](const DecisionReport& d) {
      for (const auto& r : d.results) {
        if (r.strategy.kind == StrategyKind::kTp) return r.max_batch;
      }
      return std::uint64_t{0};
    };
    lines.push_back(fmt::format(
        "m_base x{:.2f}: 1.3b-like -> {}@{}{}, 2.7b-like -> {}@{} (tp@{}){}",
        factor, ToString(a.chosen), a.chosen_batch, a_ok ? "" : " [want DP]",
        ToString(b.chosen), b.chosen_batch, tp_batch(b),
        b_ok ? "" : " [want tp]"));
    if (!a_ok || !b_ok) o.pass = false;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    o.detail += (i ? "; " : "") + lines[i];
  }
  return o;
}

Outcome Performance() {
  Outcome o;
  const ModelManifest m = LoadManifest(testing_util::Fixture("opt-2.7b-like"));
  const ChunkConfig chunk = ChooseChunkSize(m.profile, DefaultChunkCandidates());
  HardwareProfile hw;
  hw.gpu_n = 8;
  hw.m_total = 16384 * kMiB;

  constexpr int kReps = 200;
  auto start = Clock::now();
  Bytes sink = 0;
  for (int i = 0; i < kReps; ++i) {
    sink += EstimatePeak(StrategySpec::Hybrid(4, 2), m.profile, chunk,
                         m.precision, RunConfig{8, 512}, hw)
                .peak;
  }
  const double estimate_ms = SecondsSince(start) * 1e3 / kReps;

  start = Clock::now();
  const DecisionReport d = Decide(m.profile, chunk, m.precision, 512, hw);
  const double decide_ms = SecondsSince(start) * 1e3;
  sink += d.chosen_batch;

  std::vector<std::uint64_t> seq_lens;
  for (std::uint64_t i = 0; i < 2500; ++i) seq_lens.push_back(64 + i * 4);
  const std::vector<std::uint32_t> gpu_counts = {1, 2, 4, 8};
  start = Clock::now();
  const auto cells = Sweep(m.profile, chunk, m.precision, hw, seq_lens, gpu_counts);
  const double sweep_s = SecondsSince(start);
  const auto errored = std::count_if(cells.begin(), cells.end(),
                                     [](const SweepCell& c) { return !c.report; });

  o.detail = fmt::format(
      "estimate {:.4f} ms, 8-GPU decide {:.2f} ms, {}-cell sweep {:.2f} s "
      "({} errored cells)",
      estimate_ms, decide_ms, cells.size(), sweep_s, errored);
  o.pass = estimate_ms < 10.0 && decide_ms < 100.0 && sweep_s < 10.0 &&
           cells.size() == 10'000 && sink != 0;
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace memplan

int main(int argc, char** argv) {
  using memplan::Criterion;
  const std::vector<Criterion> criteria = {
      {"formula_oracle", memplan::FormulaOracle},
      {"collapse_identities", memplan::CollapseIdentities},
      {"ordering_monotonicity", memplan::OrderingMonotonicity},
      {"alignment", memplan::Alignment},
      {"decision_conformance", memplan::DecisionConformance},
      {"search_equivalence", memplan::SearchEquivalence},
      {"fixture_strategy_echo", memplan::FixtureStrategyEcho},
      {"performance", memplan::Performance},
  };
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria) std::cout << c.name << '\n';
      return 0;
    } else {
      std::cerr << "usage: memplan_acceptance [--list] [--only NAME]\n";
      return 2;
    }
  }
  int ran = 0;
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    memplan::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << c.name << ": "
              << outcome.detail << std::endl;
  }
  if (ran == 0) {
    std::cerr << "no criterion named '" << only << "'\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
