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

#ifndef MEMPLAN_PLANNER_H_
#define MEMPLAN_PLANNER_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memplan/types.h"

namespace memplan {

// Non-negative exact rational, kept in lowest terms.
class Score {
 public:
  Score() = default;
  // Requires den > 0.
  Score(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double ToDouble() const { return static_cast<double>(num_) / den_; }
  // "18" or "27/2".
  std::string ToString() const;

  friend bool operator==(const Score&, const Score&) = default;
  friend std::strong_ordering operator<=>(const Score& a, const Score& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

struct StrategyResult {
  StrategySpec strategy;
  std::uint64_t max_batch = 0;
  Score score;
  std::optional<MemoryBreakdown> breakdown_at_max;  // set iff max_batch >= 1

  friend bool operator==(const StrategyResult&,
                         const StrategyResult&) = default;
};

struct DecisionReport {
  std::vector<StrategyResult> results;
  StrategySpec chosen = StrategySpec::CpuOffload();
  std::uint64_t chosen_batch = 0;

  friend bool operator==(const DecisionReport&,
                         const DecisionReport&) = default;
};

enum class HybridMode {
  kAll,     // every dp_n x tp_n factorization with both degrees >= 2
  kSingle,  // only the most balanced factorization
};

inline constexpr std::uint64_t kDefaultBatchCap = 65536;

struct PlannerOptions {
  std::uint64_t bs_cap = kDefaultBatchCap;
  HybridMode hybrid = HybridMode::kAll;
};

// Largest batch size <= bs_cap whose peak fits in m_total; 0 when batch 1
// already does not fit. Throws CensoredSearchError if bs_cap still fits.
std::uint64_t MaxFeasibleBatch(const StrategySpec& strategy,
                               const ModelProfile& model,
                               const ChunkConfig& chunk,
                               const PrecisionSpec& prec,
                               std::uint64_t seq_len, const HardwareProfile& hw,
                               std::uint64_t bs_cap = kDefaultBatchCap);

// Samples processed per iteration, with a 3/2 credit for CDP over ADP.
Score ScoreStrategy(const StrategySpec& strategy, std::uint64_t max_batch,
                    std::uint32_t gpu_n);

// Strategies evaluated for `gpu_n` GPUs in preference order: CDP, ADP, TP,
// then hybrids by descending dp_n. A single GPU yields only CDP.
std::vector<StrategySpec> CandidateStrategies(std::uint32_t gpu_n,
                                              HybridMode mode = HybridMode::kAll);

// Highest score wins; earlier entries win ties. Falls back to CPU offload
// with batch 0 when the TP entry (CDP on one GPU) scores zero.
DecisionReport SelectStrategy(std::vector<StrategyResult> results);

DecisionReport Decide(const ModelProfile& model, const ChunkConfig& chunk,
                      const PrecisionSpec& prec, std::uint64_t seq_len,
                      const HardwareProfile& hw,
                      const PlannerOptions& options = {});

struct SweepCell {
  std::uint64_t seq_len = 0;
  std::uint32_t gpu_n = 0;
  std::optional<DecisionReport> report;
  std::string error;  // set iff report is empty

  friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

// Decide() over the seq_len x gpu_n grid, seq_len-major. hw.gpu_n is
// replaced per cell. Errors are recorded in the cell.
//
// Sweep evaluates cells with OpenMP; SweepSerial is the single-threaded
// reference and returns identical cells.
std::vector<SweepCell> Sweep(const ModelProfile& model,
                             const ChunkConfig& chunk,
                             const PrecisionSpec& prec,
                             const HardwareProfile& hw,
                             std::span<const std::uint64_t> seq_lens,
                             std::span<const std::uint32_t> gpu_counts,
                             const PlannerOptions& options = {});

std::vector<SweepCell> SweepSerial(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const HardwareProfile& hw,
                                   std::span<const std::uint64_t> seq_lens,
                                   std::span<const std::uint32_t> gpu_counts,
                                   const PlannerOptions& options = {});

}  // namespace memplan

#endif  // MEMPLAN_PLANNER_H_
