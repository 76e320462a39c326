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

#include <exception>

#include "memplan/planner.h"

namespace memplan {

namespace {

SweepCell EvaluateCell(const ModelProfile& model, const ChunkConfig& chunk,
                       const PrecisionSpec& prec, HardwareProfile hw,
                       std::uint64_t seq_len, std::uint32_t gpu_n,
                       const PlannerOptions& options) noexcept {
  SweepCell cell;
  cell.seq_len = seq_len;
  cell.gpu_n = gpu_n;
  hw.gpu_n = gpu_n;
  try {
    cell.report = Decide(model, chunk, prec, seq_len, hw, options);
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

std::vector<SweepCell> Sweep(const ModelProfile& model,
                             const ChunkConfig& chunk,
                             const PrecisionSpec& prec,
                             const HardwareProfile& hw,
                             std::span<const std::uint64_t> seq_lens,
                             std::span<const std::uint32_t> gpu_counts,
                             const PlannerOptions& options) {
  const std::int64_t cols = static_cast<std::int64_t>(gpu_counts.size());
  const std::int64_t n = static_cast<std::int64_t>(seq_lens.size()) * cols;
  std::vector<SweepCell> cells(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    cells[i] = EvaluateCell(model, chunk, prec, hw, seq_lens[i / cols],
                            gpu_counts[i % cols], options);
  }
  return cells;
}

std::vector<SweepCell> SweepSerial(const ModelProfile& model,
                                   const ChunkConfig& chunk,
                                   const PrecisionSpec& prec,
                                   const HardwareProfile& hw,
                                   std::span<const std::uint64_t> seq_lens,
                                   std::span<const std::uint32_t> gpu_counts,
                                   const PlannerOptions& options) {
  std::vector<SweepCell> cells;
  cells.reserve(seq_lens.size() * gpu_counts.size());
  for (std::uint64_t sl : seq_lens) {
    for (std::uint32_t g : gpu_counts) {
      cells.push_back(EvaluateCell(model, chunk, prec, hw, sl, g, options));
    }
  }
  return cells;
}

}  // namespace memplan
