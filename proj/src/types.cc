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

#include "memplan/types.h"

#include <algorithm>
#include <bit>
#include <charconv>

#include <fmt/format.h>

#include "memplan/errors.h"

namespace memplan {

void Validate(const PrecisionSpec& prec) {
  if (prec.half_bytes < 1) {
    throw ValidationError("half_bytes", "must be at least 1");
  }
  if (prec.full_bytes < prec.half_bytes) {
    throw ValidationError("full_bytes", "must be >= half_bytes");
  }
  if (prec.lm_head_bytes != prec.half_bytes &&
      prec.lm_head_bytes != prec.full_bytes) {
    throw ValidationError("lm_head_bytes",
                          "must equal half_bytes or full_bytes");
  }
}

std::string_view ToString(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kEmbedding:
      return "embedding";
    case OperatorKind::kLinear:
      return "linear";
    case OperatorKind::kBias:
      return "bias";
    case OperatorKind::kLayerNorm:
      return "layernorm";
    case OperatorKind::kOther:
      return "other";
  }
  return "other";
}

OperatorKind ParseOperatorKind(std::string_view text, const std::string& field) {
  for (auto kind : {OperatorKind::kEmbedding, OperatorKind::kLinear,
                    OperatorKind::kBias, OperatorKind::kLayerNorm,
                    OperatorKind::kOther}) {
    if (ToString(kind) == text) return kind;
  }
  throw ValidationError(field, fmt::format("unknown operator kind '{}'", text));
}

void Validate(const ModelProfile& model) {
  if (model.dict_n < 1) throw ValidationError("dict_n", "must be >= 1");
  if (model.o_n < 1) throw ValidationError("o_n", "must be >= 1");
  if (model.l_n < 1) throw ValidationError("l_n", "must be >= 1");
  if (model.e_n < 1) throw ValidationError("e_n", "must be >= 1");

  std::uint64_t embedding_sum = 0;
  std::uint64_t other_sum = 0;
  for (const auto& op : model.operators) {
    if (op.kind == OperatorKind::kEmbedding) {
      embedding_sum = CheckedAdd(embedding_sum, op.param_count);
    } else {
      other_sum = CheckedAdd(other_sum, op.param_count);
    }
  }
  if (embedding_sum != model.embed_p) {
    throw ValidationError(
        "embed_p", fmt::format("{} does not match the {} elements held by "
                               "embedding operators",
                               model.embed_p, embedding_sum));
  }
  if (other_sum != model.other_p) {
    throw ValidationError(
        "other_p", fmt::format("{} does not match the {} elements held by "
                               "non-embedding operators",
                               model.other_p, other_sum));
  }
}

std::uint64_t MaxChunkedOperator(const ModelProfile& model) {
  std::uint64_t max_count = 0;
  for (const auto& op : model.operators) {
    if (op.kind != OperatorKind::kEmbedding) {
      max_count = std::max(max_count, op.param_count);
    }
  }
  return max_count;
}

void Validate(const ChunkConfig& chunk) {
  if (chunk.chunk_size < 1) {
    throw ValidationError("chunk_size", "must be >= 1");
  }
}

void Validate(const HardwareProfile& hw) {
  if (hw.gpu_n < 1) throw ValidationError("gpu_n", "must be >= 1");
  if (hw.cu_p == 0 || !std::has_single_bit(hw.cu_p)) {
    throw ValidationError("cu_p", "page size must be a positive power of two");
  }
  if (hw.m_total <= hw.m_base) {
    throw ValidationError("m_total", "capacity must exceed m_base");
  }
}

void Validate(const RunConfig& run) {
  if (run.batch_size < 1) throw ValidationError("batch_size", "must be >= 1");
  if (run.seq_len < 2) throw ValidationError("seq_len", "must be >= 2");
}

void Validate(const StrategySpec& strat, const HardwareProfile& hw) {
  switch (strat.kind) {
    case StrategyKind::kCdp:
    case StrategyKind::kAdp:
      if (strat.tp_n != 1 || strat.dp_n != hw.gpu_n) {
        throw ValidationError("strategy",
                              "data parallelism requires dp_n = gpu_n, tp_n = 1");
      }
      return;
    case StrategyKind::kTp:
      if (strat.dp_n != 1 || strat.tp_n != hw.gpu_n) {
        throw ValidationError("strategy",
                              "tensor parallelism requires tp_n = gpu_n, dp_n = 1");
      }
      return;
    case StrategyKind::kHybrid:
      if (strat.dp_n < 2 || strat.tp_n < 2) {
        throw ValidationError(
            "strategy", "hybrid requires dp_n >= 2 and tp_n >= 2; use adp or tp");
      }
      if (std::uint64_t{strat.dp_n} * strat.tp_n != hw.gpu_n) {
        throw ValidationError(
            "strategy", fmt::format("hybrid {}x{} does not multiply to {} GPUs",
                                    strat.dp_n, strat.tp_n, hw.gpu_n));
      }
      return;
    case StrategyKind::kCpuOffload:
      throw ValidationError("strategy", "cpu_offload has no GPU memory estimate");
  }
}

std::string ToString(const StrategySpec& strat) {
  switch (strat.kind) {
    case StrategyKind::kCdp:
      return "cdp";
    case StrategyKind::kAdp:
      return "adp";
    case StrategyKind::kTp:
      return "tp";
    case StrategyKind::kHybrid:
      return fmt::format("hybrid:{}x{}", strat.dp_n, strat.tp_n);
    case StrategyKind::kCpuOffload:
      return "cpu_offload";
  }
  return "unknown";
}

namespace {

bool ParseDegree(std::string_view text, std::uint32_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

StrategySpec ParseStrategy(std::string_view text, std::uint32_t gpu_n) {
  if (text == "cdp") return StrategySpec::Cdp(gpu_n);
  if (text == "adp") return StrategySpec::Adp(gpu_n);
  if (text == "tp") return StrategySpec::Tp(gpu_n);
  constexpr std::string_view kHybridPrefix = "hybrid:";
  if (text.starts_with(kHybridPrefix)) {
    auto dims = text.substr(kHybridPrefix.size());
    auto x = dims.find('x');
    std::uint32_t dp = 0;
    std::uint32_t tp = 0;
    if (x == std::string_view::npos || !ParseDegree(dims.substr(0, x), dp) ||
        !ParseDegree(dims.substr(x + 1), tp)) {
      throw ValidationError(
          "strategy", fmt::format("cannot parse '{}', expected hybrid:DPxTP", text));
    }
    return StrategySpec::Hybrid(dp, tp);
  }
  throw ValidationError(
      "strategy",
      fmt::format("unknown strategy '{}', expected cdp|adp|tp|hybrid:DPxTP", text));
}

}  // namespace memplan
