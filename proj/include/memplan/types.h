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

#ifndef MEMPLAN_TYPES_H_
#define MEMPLAN_TYPES_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "memplan/arith.h"

namespace memplan {

inline constexpr Bytes kDefaultPageSize = 2 * kMiB;
// Placeholder until m_base is measured on the target machine.
inline constexpr Bytes kDefaultBaseBytes = kGiB;

// Bytes per element for the low- and full-precision copies of the model
// and for the logits produced by lm_head.
struct PrecisionSpec {
  std::uint32_t half_bytes = 2;
  std::uint32_t full_bytes = 4;
  std::uint32_t lm_head_bytes = 2;

  friend bool operator==(const PrecisionSpec&, const PrecisionSpec&) = default;
};

void Validate(const PrecisionSpec& prec);

enum class OperatorKind { kEmbedding, kLinear, kBias, kLayerNorm, kOther };

std::string_view ToString(OperatorKind kind);
// Throws ValidationError naming `field` for an unknown kind.
OperatorKind ParseOperatorKind(std::string_view text,
                               const std::string& field = "kind");

struct OperatorRecord {
  std::string name;
  OperatorKind kind = OperatorKind::kOther;
  std::uint64_t param_count = 0;  // elements

  friend bool operator==(const OperatorRecord&,
                         const OperatorRecord&) = default;
};

// Parameter manifest of the transformer part plus the architecture scalars
// the estimator needs. Operators list only the transformer part; lm_head is
// carried separately as `lm_p` (bytes).
struct ModelProfile {
  std::vector<OperatorRecord> operators;
  std::uint64_t dict_n = 1;   // embedding dictionary size
  std::uint64_t o_n = 1;      // hidden width
  std::uint64_t l_n = 1;      // transformer layers
  std::uint64_t e_n = 1;      // embedding operators
  std::uint64_t embed_p = 0;  // elements held by embedding operators
  std::uint64_t other_p = 0;  // remaining transformer elements (chunked)
  Bytes lm_p = 0;             // lm_head parameter bytes

  friend bool operator==(const ModelProfile&, const ModelProfile&) = default;
};

// Checks the scalar invariants and that embed_p / other_p agree with the
// operator list. Throws ValidationError naming the first offending field.
void Validate(const ModelProfile& model);

// Largest param_count among operators placed in chunks (everything except
// embeddings). Zero for a model without chunked operators.
std::uint64_t MaxChunkedOperator(const ModelProfile& model);

struct ChunkConfig {
  std::uint64_t chunk_size = 1;  // elements

  friend bool operator==(const ChunkConfig&, const ChunkConfig&) = default;
};

void Validate(const ChunkConfig& chunk);

struct HardwareProfile {
  std::uint32_t gpu_n = 1;
  Bytes m_total = 0;  // capacity per GPU
  Bytes cu_p = kDefaultPageSize;
  Bytes m_base = kDefaultBaseBytes;

  friend bool operator==(const HardwareProfile&,
                         const HardwareProfile&) = default;
};

void Validate(const HardwareProfile& hw);

struct RunConfig {
  std::uint64_t batch_size = 1;
  std::uint64_t seq_len = 2;
};

void Validate(const RunConfig& run);

enum class StrategyKind { kCdp, kAdp, kTp, kHybrid, kCpuOffload };

struct StrategySpec {
  StrategyKind kind = StrategyKind::kCdp;
  std::uint32_t dp_n = 1;
  std::uint32_t tp_n = 1;

  static StrategySpec Cdp(std::uint32_t gpu_n) {
    return {StrategyKind::kCdp, gpu_n, 1};
  }
  static StrategySpec Adp(std::uint32_t gpu_n) {
    return {StrategyKind::kAdp, gpu_n, 1};
  }
  static StrategySpec Tp(std::uint32_t gpu_n) {
    return {StrategyKind::kTp, 1, gpu_n};
  }
  static StrategySpec Hybrid(std::uint32_t dp_n, std::uint32_t tp_n) {
    return {StrategyKind::kHybrid, dp_n, tp_n};
  }
  static StrategySpec CpuOffload() { return {StrategyKind::kCpuOffload, 0, 0}; }

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

// Checks the degree constraints of `strat` against the GPU count.
void Validate(const StrategySpec& strat, const HardwareProfile& hw);

// "cdp", "adp", "tp", "hybrid:2x4", "cpu_offload".
std::string ToString(const StrategySpec& strat);
// Inverse of ToString for the GPU strategies; dp_n / tp_n of cdp, adp and
// tp are filled from `gpu_n`.
StrategySpec ParseStrategy(std::string_view text, std::uint32_t gpu_n);

// Per-GPU memory composition of one strategy at one batch size.
//
// `params`, `params_half`, `params_full` and `optimizer_states` are the
// unsharded model totals; `model_states` is what one GPU actually holds of
// them under the strategy. The peak is always
//   base + model_states + outputs + lm_head + tp_backward_buffer.
struct MemoryBreakdown {
  StrategySpec strategy;
  Bytes base = 0;
  Bytes params = 0;
  Bytes params_half = 0;
  Bytes params_full = 0;
  Bytes optimizer_states = 0;
  Bytes model_states = 0;
  Bytes outputs = 0;
  Bytes lm_head = 0;
  Bytes tp_backward_buffer = 0;
  Bytes peak = 0;

  friend bool operator==(const MemoryBreakdown&,
                         const MemoryBreakdown&) = default;
};

}  // namespace memplan

#endif  // MEMPLAN_TYPES_H_
