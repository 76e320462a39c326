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

#include "memplan/estimator.h"

#include "memplan/errors.h"

namespace memplan {

namespace {

// embed_p plus other_p padded up to whole chunks.
std::uint64_t ChunkedElements(const ModelProfile& model,
                              const ChunkConfig& chunk) {
  Validate(chunk);
  const std::uint64_t chunks = CeilDiv(model.other_p, chunk.chunk_size);
  return CheckedAdd(model.embed_p, CheckedMul(chunks, chunk.chunk_size));
}

// bs * sl * o_n: elements in one layer output.
std::uint64_t LayerOutputElements(const ModelProfile& model,
                                  const RunConfig& run) {
  return CheckedMul(CheckedMul(run.batch_size, run.seq_len), model.o_n);
}

Bytes ShardedStates(Bytes states, std::uint32_t gpu_n) {
  if (gpu_n == 0) throw ValidationError("gpu_n", "must be >= 1");
  return CeilDiv(states, gpu_n);
}

}  // namespace

ParamBytes EstimateParams(const ModelProfile& model, const ChunkConfig& chunk,
                          const PrecisionSpec& prec,
                          const HardwareProfile& hw) {
  const std::uint64_t elements = ChunkedElements(model, chunk);
  ParamBytes out;
  out.total = AlignToPage(
      CheckedMul(elements, std::uint64_t{prec.half_bytes} + prec.full_bytes),
      hw.cu_p);
  out.half = AlignToPage(CheckedMul(elements, prec.half_bytes), hw.cu_p);
  out.full = out.total - out.half;
  return out;
}

Bytes EstimateOptimizerStates(const ModelProfile& model,
                              const PrecisionSpec& prec,
                              const HardwareProfile& hw) {
  const std::uint64_t per_element = 2 * std::uint64_t{prec.full_bytes};
  Bytes total = 0;
  for (const auto& op : model.operators) {
    if (op.kind != OperatorKind::kEmbedding && op.kind != OperatorKind::kLinear) {
      continue;
    }
    total = CheckedAdd(
        total, AlignToPage(CheckedMul(op.param_count, per_element), hw.cu_p));
  }
  return total;
}

Bytes EstimateOutputs(const ModelProfile& model, const RunConfig& run,
                      const PrecisionSpec& prec, const HardwareProfile& hw) {
  const std::uint64_t tensors = CheckedAdd(model.e_n, model.l_n);
  return AlignToPage(
      CheckedMul(CheckedMul(tensors, LayerOutputElements(model, run)),
                 prec.half_bytes),
      hw.cu_p);
}

Bytes EstimateLmHead(const ModelProfile& model, const RunConfig& run,
                     const PrecisionSpec& prec, const HardwareProfile& hw) {
  if (run.seq_len < 2) throw ValidationError("seq_len", "must be >= 2");
  const std::uint64_t row = CheckedMul(model.dict_n, prec.lm_head_bytes);
  const Bytes logits = AlignToPage(
      CheckedMul(CheckedMul(run.batch_size, run.seq_len), row), hw.cu_p);
  const Bytes shifted = AlignToPage(
      CheckedMul(CheckedMul(run.batch_size, run.seq_len - 1), row), hw.cu_p);
  return CheckedAdd(CheckedAdd(logits, CheckedMul(2, shifted)), model.lm_p);
}

Bytes EstimateTpBackwardBuffer(const ModelProfile& model, const RunConfig& run,
                               const PrecisionSpec& prec,
                               const StrategySpec& strat,
                               const HardwareProfile& hw) {
  if (strat.tp_n < 1) throw ValidationError("tp_n", "must be >= 1");
  const std::uint64_t num = CheckedMul(
      CheckedMul(CheckedMul(model.l_n, LayerOutputElements(model, run)),
                 strat.tp_n - 1),
      prec.half_bytes);
  return AlignRationalToPage(num, strat.tp_n, hw.cu_p);
}

PeakEvaluator::PeakEvaluator(const StrategySpec& strat,
                             const ModelProfile& model,
                             const ChunkConfig& chunk,
                             const PrecisionSpec& prec, std::uint64_t seq_len,
                             const HardwareProfile& hw)
    : strat_(strat),
      model_(&model),
      prec_(prec),
      seq_len_(seq_len),
      hw_(hw),
      params_(EstimateParams(model, chunk, prec, hw)),
      optimizer_states_(EstimateOptimizerStates(model, prec, hw)) {
  if (seq_len < 2) throw ValidationError("seq_len", "must be >= 2");
  switch (strat.kind) {
    case StrategyKind::kCdp:
      model_states_ = CheckedAdd(params_.total, optimizer_states_);
      break;
    case StrategyKind::kAdp:
      model_states_ = CheckedAdd(
          params_.half,
          ShardedStates(CheckedAdd(params_.full, optimizer_states_), hw.gpu_n));
      break;
    case StrategyKind::kTp:
      model_states_ = ShardedStates(
          CheckedAdd(params_.total, optimizer_states_), hw.gpu_n);
      break;
    case StrategyKind::kHybrid: {
      if (strat.tp_n > hw.gpu_n) {
        throw ValidationError("tp_n", "cannot exceed gpu_n");
      }
      // Each GPU keeps only its tensor-parallel slice of the gathered
      // low-precision parameters; the removed share rounds down.
      const Bytes removed =
          CheckedMul(params_.half, strat.tp_n) / hw.gpu_n;
      model_states_ = CheckedAdd(
          params_.half,
          ShardedStates(CheckedAdd(params_.full, optimizer_states_), hw.gpu_n));
      if (removed > model_states_) {
        throw InconsistentProfileError(
            "hybrid estimate would drop below m_base");
      }
      model_states_ -= removed;
      break;
    }
    case StrategyKind::kCpuOffload:
      throw ValidationError("strategy", "cpu_offload has no GPU memory estimate");
  }
}

MemoryBreakdown PeakEvaluator::At(std::uint64_t batch_size) const {
  const RunConfig run{batch_size, seq_len_};
  MemoryBreakdown b;
  b.strategy = strat_;
  b.base = hw_.m_base;
  b.params = params_.total;
  b.params_half = params_.half;
  b.params_full = params_.full;
  b.optimizer_states = optimizer_states_;
  b.model_states = model_states_;
  b.outputs = EstimateOutputs(*model_, run, prec_, hw_);
  b.lm_head = EstimateLmHead(*model_, run, prec_, hw_);
  if (strat_.kind == StrategyKind::kTp || strat_.kind == StrategyKind::kHybrid) {
    b.tp_backward_buffer =
        EstimateTpBackwardBuffer(*model_, run, prec_, strat_, hw_);
  }
  b.peak = CheckedAdd(
      CheckedAdd(CheckedAdd(b.base, b.model_states),
                 CheckedAdd(b.outputs, b.lm_head)),
      b.tp_backward_buffer);
  return b;
}

MemoryBreakdown EstimatePeakSingle(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const RunConfig& run,
                                   const HardwareProfile& hw) {
  return PeakEvaluator(StrategySpec::Cdp(hw.gpu_n), model, chunk, prec,
                       run.seq_len, hw)
      .At(run.batch_size);
}

MemoryBreakdown EstimatePeakAdp(const ModelProfile& model,
                                const ChunkConfig& chunk,
                                const PrecisionSpec& prec,
                                const RunConfig& run,
                                const HardwareProfile& hw) {
  return PeakEvaluator(StrategySpec::Adp(hw.gpu_n), model, chunk, prec,
                       run.seq_len, hw)
      .At(run.batch_size);
}

MemoryBreakdown EstimatePeakTp(const ModelProfile& model,
                               const ChunkConfig& chunk,
                               const PrecisionSpec& prec, const RunConfig& run,
                               const StrategySpec& strat,
                               const HardwareProfile& hw) {
  if (strat.kind != StrategyKind::kTp) {
    throw ValidationError("strategy", "expected a tp strategy");
  }
  Validate(strat, hw);
  return PeakEvaluator(strat, model, chunk, prec, run.seq_len, hw)
      .At(run.batch_size);
}

MemoryBreakdown EstimatePeakHybrid(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const RunConfig& run,
                                   const StrategySpec& strat,
                                   const HardwareProfile& hw) {
  if (strat.kind != StrategyKind::kHybrid) {
    throw ValidationError("strategy", "expected a hybrid strategy");
  }
  Validate(strat, hw);
  return PeakEvaluator(strat, model, chunk, prec, run.seq_len, hw)
      .At(run.batch_size);
}

MemoryBreakdown EstimatePeak(const StrategySpec& strat,
                             const ModelProfile& model,
                             const ChunkConfig& chunk,
                             const PrecisionSpec& prec, const RunConfig& run,
                             const HardwareProfile& hw) {
  Validate(strat, hw);
  return PeakEvaluator(strat, model, chunk, prec, run.seq_len, hw)
      .At(run.batch_size);
}

}  // namespace memplan
