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

#include "memplan/planner.h"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "memplan/errors.h"
#include "memplan/estimator.h"

namespace memplan {

Score::Score(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("Score: zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (num_ == 0) den_ = 1;
}

std::string Score::ToString() const {
  if (den_ == 1) return fmt::format("{}", num_);
  return fmt::format("{}/{}", num_, den_);
}

std::strong_ordering operator<=>(const Score& a, const Score& b) {
  using u128 = unsigned __int128;
  return u128{a.num_} * b.den_ <=> u128{b.num_} * a.den_;
}

std::uint64_t MaxFeasibleBatch(const StrategySpec& strategy,
                               const ModelProfile& model,
                               const ChunkConfig& chunk,
                               const PrecisionSpec& prec,
                               std::uint64_t seq_len, const HardwareProfile& hw,
                               std::uint64_t bs_cap) {
  if (bs_cap < 1) throw ValidationError("bs_cap", "must be >= 1");
  const PeakEvaluator eval(strategy, model, chunk, prec, seq_len, hw);
  auto fits = [&](std::uint64_t bs) {
    try {
      return eval.At(bs).peak <= hw.m_total;
    } catch (const std::overflow_error&) {
      return false;
    }
  };
  auto censored = [&] {
    return CensoredSearchError(fmt::format(
        "{}: batch size cap {} still fits in memory; raise the cap",
        ToString(strategy), bs_cap));
  };

  if (!fits(1)) return 0;
  // Peaks are nondecreasing in batch size: grow until infeasible, then bisect
  // with lo feasible and hi infeasible.
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  while (hi == 0) {
    const std::uint64_t next = lo > bs_cap / 2 ? bs_cap : lo * 2;
    if (next == lo) throw censored();
    if (fits(next)) {
      lo = next;
    } else {
      hi = next;
    }
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Score ScoreStrategy(const StrategySpec& strategy, std::uint64_t max_batch,
                    std::uint32_t gpu_n) {
  switch (strategy.kind) {
    case StrategyKind::kCdp:
      return Score(CheckedMul(CheckedMul(max_batch, gpu_n), 3), 2);
    case StrategyKind::kAdp:
      return Score(CheckedMul(max_batch, gpu_n), 1);
    case StrategyKind::kTp:
      return Score(max_batch, 1);
    case StrategyKind::kHybrid:
      return Score(CheckedMul(max_batch, strategy.dp_n), 1);
    case StrategyKind::kCpuOffload:
      return Score();
  }
  return Score();
}

std::vector<StrategySpec> CandidateStrategies(std::uint32_t gpu_n,
                                              HybridMode mode) {
  if (gpu_n < 1) throw ValidationError("gpu_n", "must be >= 1");
  if (gpu_n == 1) return {StrategySpec::Cdp(1)};
  std::vector<StrategySpec> out = {StrategySpec::Cdp(gpu_n),
                                   StrategySpec::Adp(gpu_n),
                                   StrategySpec::Tp(gpu_n)};
  std::vector<StrategySpec> hybrids;
  for (std::uint32_t dp = gpu_n / 2; dp >= 2; --dp) {
    if (gpu_n % dp == 0 && gpu_n / dp >= 2) {
      hybrids.push_back(StrategySpec::Hybrid(dp, gpu_n / dp));
    }
  }
  if (mode == HybridMode::kSingle && !hybrids.empty()) {
    // Most balanced split; the first hit has the larger dp_n.
    auto balance = [](const StrategySpec& s) {
      return s.dp_n > s.tp_n ? s.dp_n - s.tp_n : s.tp_n - s.dp_n;
    };
    StrategySpec best = hybrids.front();
    for (const auto& h : hybrids) {
      if (balance(h) < balance(best)) best = h;
    }
    hybrids = {best};
  }
  out.insert(out.end(), hybrids.begin(), hybrids.end());
  return out;
}

DecisionReport SelectStrategy(std::vector<StrategyResult> results) {
  DecisionReport report;
  report.results = std::move(results);
  if (report.results.empty()) return report;

  const StrategyResult* fallback_gate = nullptr;
  for (const auto& r : report.results) {
    if (r.strategy.kind == StrategyKind::kTp) fallback_gate = &r;
  }
  if (fallback_gate == nullptr && report.results.size() == 1 &&
      report.results.front().strategy.kind == StrategyKind::kCdp) {
    // One GPU: TP is the same formula as CDP.
    fallback_gate = &report.results.front();
  }
  if (fallback_gate == nullptr) {
    throw std::invalid_argument("SelectStrategy: no TP result to gate on");
  }
  if (fallback_gate->score.is_zero()) return report;

  const StrategyResult* best = &report.results.front();
  for (const auto& r : report.results) {
    if (r.score > best->score) best = &r;
  }
  report.chosen = best->strategy;
  report.chosen_batch = best->max_batch;
  return report;
}

DecisionReport Decide(const ModelProfile& model, const ChunkConfig& chunk,
                      const PrecisionSpec& prec, std::uint64_t seq_len,
                      const HardwareProfile& hw, const PlannerOptions& options) {
  Validate(hw);
  Validate(prec);
  Validate(chunk);
  std::vector<StrategyResult> results;
  for (const auto& strategy : CandidateStrategies(hw.gpu_n, options.hybrid)) {
    StrategyResult r;
    r.strategy = strategy;
    r.max_batch = MaxFeasibleBatch(strategy, model, chunk, prec, seq_len, hw,
                                   options.bs_cap);
    r.score = ScoreStrategy(strategy, r.max_batch, hw.gpu_n);
    if (r.max_batch >= 1) {
      r.breakdown_at_max = PeakEvaluator(strategy, model, chunk, prec, seq_len, hw)
                               .At(r.max_batch);
    }
    results.push_back(std::move(r));
  }
  return SelectStrategy(std::move(results));
}

}  // namespace memplan
