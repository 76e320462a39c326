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

#ifndef MEMPLAN_REPORT_H_
#define MEMPLAN_REPORT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memplan/planner.h"
#include "memplan/types.h"

namespace memplan {

inline constexpr int kOutputSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Everything a command reports, in bytes. MB figures are derived on output.
struct OutputRecord {
  std::string command;
  std::string tool_version = kToolVersion;
  std::string model_name;
  bool lm_head_tied = false;
  Bytes lm_p = 0;
  HardwareProfile hw;
  bool m_base_calibrated = false;
  std::uint64_t seq_len = 0;
  std::optional<std::uint64_t> batch_size;
  ChunkConfig chunk;
  PrecisionSpec precision;
  std::vector<MemoryBreakdown> estimates;
  std::optional<DecisionReport> decision;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

// bytes / 2^20 rounded half-up to one decimal, e.g. "16314.2".
std::string FormatMb(Bytes bytes);
double ToMb(Bytes bytes);

nlohmann::json ToJson(const OutputRecord& record);
// Inverse of ToJson; MB fields are ignored. Throws ParseError on schema
// violations.
OutputRecord OutputRecordFromJson(const nlohmann::json& doc);

std::string RenderText(const OutputRecord& record);

// One header line plus one row per cell, fixed column order.
void WriteSweepCsv(std::ostream& out, std::span<const SweepCell> cells);

}  // namespace memplan

#endif  // MEMPLAN_REPORT_H_
