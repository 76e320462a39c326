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

#ifndef MEMPLAN_ESTIMATOR_H_
#define MEMPLAN_ESTIMATOR_H_

#include "memplan/arith.h"
#include "memplan/types.h"

namespace memplan {

// Chunk-managed parameter memory. `total` covers the low- and full-precision
// copies together (the low-precision copy is reused for gradients).
// `half` is the low-precision copy aligned on its own and `full` is the
// remainder, so half + full == total.
struct ParamBytes {
  Bytes total = 0;
  Bytes half = 0;
  Bytes full = 0;
};

ParamBytes EstimateParams(const ModelProfile& model, const ChunkConfig& chunk,
                          const PrecisionSpec& prec, const HardwareProfile& hw);

// Momentum and variance, page-aligned per embedding/linear operator. Bias,
// layernorm and other operators fit into fragmentation and count as zero.
Bytes EstimateOptimizerStates(const ModelProfile& model,
                              const PrecisionSpec& prec,
                              const HardwareProfile& hw);

// Layer and embedding outputs retained under gradient checkpointing,
// aligned once as an aggregate.
Bytes EstimateOutputs(const ModelProfile& model, const RunConfig& run,
                      const PrecisionSpec& prec, const HardwareProfile& hw);

// Logits, the two shifted-logit buffers of the loss, and the raw lm_head
// parameter bytes. Throws ValidationError when seq_len < 2.
Bytes EstimateLmHead(const ModelProfile& model, const RunConfig& run,
                     const PrecisionSpec& prec, const HardwareProfile& hw);

// All-gather buffer of the tensor-parallel backward pass. Zero for tp_n == 1.
Bytes EstimateTpBackwardBuffer(const ModelProfile& model, const RunConfig& run,
                               const PrecisionSpec& prec,
                               const StrategySpec& strat,
                               const HardwareProfile& hw);

MemoryBreakdown EstimatePeakSingle(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const RunConfig& run,
                                   const HardwareProfile& hw);

MemoryBreakdown EstimatePeakAdp(const ModelProfile& model,
                                const ChunkConfig& chunk,
                                const PrecisionSpec& prec,
                                const RunConfig& run,
                                const HardwareProfile& hw);

MemoryBreakdown EstimatePeakTp(const ModelProfile& model,
                               const ChunkConfig& chunk,
                               const PrecisionSpec& prec, const RunConfig& run,
                               const StrategySpec& strat,
                               const HardwareProfile& hw);

// Throws InconsistentProfileError if removing the tensor-parallel share of
// the low-precision parameters would leave less than m_base.
MemoryBreakdown EstimatePeakHybrid(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const RunConfig& run,
                                   const StrategySpec& strat,
                                   const HardwareProfile& hw);

// Dispatches on strat.kind. CPU offload has no GPU estimate and is rejected.
MemoryBreakdown EstimatePeak(const StrategySpec& strat,
                             const ModelProfile& model,
                             const ChunkConfig& chunk,
                             const PrecisionSpec& prec, const RunConfig& run,
                             const HardwareProfile& hw);

// Evaluates one strategy at many batch sizes. The batch-independent terms
// (parameters, optimizer states) are computed once.
class PeakEvaluator {
 public:
  PeakEvaluator(const StrategySpec& strat, const ModelProfile& model,
                const ChunkConfig& chunk, const PrecisionSpec& prec,
                std::uint64_t seq_len, const HardwareProfile& hw);

  MemoryBreakdown At(std::uint64_t batch_size) const;

  const StrategySpec& strategy() const { return strat_; }

 private:
  StrategySpec strat_;
  const ModelProfile* model_;
  PrecisionSpec prec_;
  std::uint64_t seq_len_;
  HardwareProfile hw_;
  ParamBytes params_;
  Bytes optimizer_states_;
  Bytes model_states_;
};

}  // namespace memplan

#endif  // MEMPLAN_ESTIMATOR_H_
