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

#include "memplan/report.h"

#include <algorithm>
#include <array>
#include <utility>

#include <fmt/format.h>

#include "memplan/errors.h"

namespace memplan {

using nlohmann::json;

namespace {

std::uint64_t TenthsOfMb(Bytes bytes) {
  using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((u128{bytes} * 10 + kMiB / 2) / kMiB);
}

// Field order here fixes the order in every output format.
constexpr std::array<std::pair<const char*, Bytes MemoryBreakdown::*>, 10>
    kBreakdownFields = {{
        {"base", &MemoryBreakdown::base},
        {"params", &MemoryBreakdown::params},
        {"params_half", &MemoryBreakdown::params_half},
        {"params_full", &MemoryBreakdown::params_full},
        {"optimizer_states", &MemoryBreakdown::optimizer_states},
        {"model_states", &MemoryBreakdown::model_states},
        {"outputs", &MemoryBreakdown::outputs},
        {"lm_head", &MemoryBreakdown::lm_head},
        {"tp_backward_buffer", &MemoryBreakdown::tp_backward_buffer},
        {"peak", &MemoryBreakdown::peak},
    }};

json StrategyToJson(const StrategySpec& s) {
  return {{"name", ToString(s)}, {"dp_n", s.dp_n}, {"tp_n", s.tp_n}};
}

StrategySpec StrategyFromJson(const json& j) {
  const auto name = j.at("name").get<std::string>();
  if (name == "cpu_offload") return StrategySpec::CpuOffload();
  StrategySpec s = ParseStrategy(name, j.at("dp_n").get<std::uint32_t>());
  s.dp_n = j.at("dp_n").get<std::uint32_t>();
  s.tp_n = j.at("tp_n").get<std::uint32_t>();
  return s;
}

json BreakdownToJson(const MemoryBreakdown& b, const OutputRecord& r) {
  json bytes = json::object();
  json mb = json::object();
  for (const auto& [name, field] : kBreakdownFields) {
    bytes[name] = b.*field;
    mb[name] = ToMb(b.*field);
  }
  json out = {{"strategy", StrategyToJson(b.strategy)},
              {"bytes", std::move(bytes)},
              {"mb", std::move(mb)},
              {"fits", b.peak <= r.hw.m_total}};
  if (r.lm_head_tied) {
    // Alternative reading: the tied lm_head shares the input embedding's
    // storage and adds no bytes of its own.
    const Bytes shared = b.peak - std::min(b.peak, r.lm_p);
    out["peak_if_lm_head_shared_bytes"] = shared;
    out["peak_if_lm_head_shared_mb"] = ToMb(shared);
  }
  return out;
}

MemoryBreakdown BreakdownFromJson(const json& j) {
  MemoryBreakdown b;
  b.strategy = StrategyFromJson(j.at("strategy"));
  const json& bytes = j.at("bytes");
  for (const auto& [name, field] : kBreakdownFields) {
    b.*field = bytes.at(name).get<Bytes>();
  }
  return b;
}

std::string Verdict(const OutputRecord& r) {
  if (r.decision) {
    return r.decision->chosen.kind == StrategyKind::kCpuOffload ? "cpu_offload"
                                                                : "gpu";
  }
  for (const auto& b : r.estimates) {
    if (b.peak > r.hw.m_total) return "oom";
  }
  return "fits";
}

std::string CsvEscape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string FormatMb(Bytes bytes) {
  const std::uint64_t tenths = TenthsOfMb(bytes);
  return fmt::format("{}.{}", tenths / 10, tenths % 10);
}

double ToMb(Bytes bytes) { return static_cast<double>(TenthsOfMb(bytes)) / 10.0; }

json ToJson(const OutputRecord& r) {
  json input = {
      {"model", r.model_name},
      {"lm_head_tied", r.lm_head_tied},
      {"lm_p_bytes", r.lm_p},
      {"hardware",
       {{"gpu_n", r.hw.gpu_n},
        {"m_total_bytes", r.hw.m_total},
        {"m_total_mb", ToMb(r.hw.m_total)},
        {"page_size_bytes", r.hw.cu_p},
        {"m_base_bytes", r.hw.m_base},
        {"m_base_source",
         r.m_base_calibrated ? "calibrated" : "default placeholder"}}},
      {"run",
       {{"seq_len", r.seq_len},
        {"batch_size",
         r.batch_size ? json(*r.batch_size) : json(nullptr)}}},
      {"chunk_size", r.chunk.chunk_size},
      {"precision",
       {{"half_bytes", r.precision.half_bytes},
        {"full_bytes", r.precision.full_bytes},
        {"lm_head_bytes", r.precision.lm_head_bytes}}},
  };

  json estimates = json::array();
  for (const auto& b : r.estimates) estimates.push_back(BreakdownToJson(b, r));

  json decision = nullptr;
  if (r.decision) {
    json results = json::array();
    for (const auto& res : r.decision->results) {
      results.push_back(
          {{"strategy", StrategyToJson(res.strategy)},
           {"max_batch", res.max_batch},
           {"score", res.score.ToString()},
           {"score_num", res.score.num()},
           {"score_den", res.score.den()},
           {"breakdown_at_max", res.breakdown_at_max
                                    ? BreakdownToJson(*res.breakdown_at_max, r)
                                    : json(nullptr)}});
    }
    decision = {{"results", std::move(results)},
                {"chosen", StrategyToJson(r.decision->chosen)},
                {"chosen_batch", r.decision->chosen_batch}};
  }

  return {{"schema_version", kOutputSchemaVersion},
          {"tool", "memplan"},
          {"tool_version", r.tool_version},
          {"command", r.command},
          {"input", std::move(input)},
          {"estimates", std::move(estimates)},
          {"decision", std::move(decision)},
          {"verdict", Verdict(r)}};
}

OutputRecord OutputRecordFromJson(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kOutputSchemaVersion) {
      throw ParseError("output record: unsupported schema_version");
    }
    OutputRecord r;
    r.command = doc.at("command").get<std::string>();
    r.tool_version = doc.at("tool_version").get<std::string>();
    const json& input = doc.at("input");
    r.model_name = input.at("model").get<std::string>();
    r.lm_head_tied = input.at("lm_head_tied").get<bool>();
    r.lm_p = input.at("lm_p_bytes").get<Bytes>();
    const json& hw = input.at("hardware");
    r.hw.gpu_n = hw.at("gpu_n").get<std::uint32_t>();
    r.hw.m_total = hw.at("m_total_bytes").get<Bytes>();
    r.hw.cu_p = hw.at("page_size_bytes").get<Bytes>();
    r.hw.m_base = hw.at("m_base_bytes").get<Bytes>();
    r.m_base_calibrated = hw.at("m_base_source").get<std::string>() == "calibrated";
    const json& run = input.at("run");
    r.seq_len = run.at("seq_len").get<std::uint64_t>();
    if (!run.at("batch_size").is_null()) {
      r.batch_size = run.at("batch_size").get<std::uint64_t>();
    }
    r.chunk.chunk_size = input.at("chunk_size").get<std::uint64_t>();
    const json& prec = input.at("precision");
    r.precision.half_bytes = prec.at("half_bytes").get<std::uint32_t>();
    r.precision.full_bytes = prec.at("full_bytes").get<std::uint32_t>();
    r.precision.lm_head_bytes = prec.at("lm_head_bytes").get<std::uint32_t>();
    for (const json& b : doc.at("estimates")) {
      r.estimates.push_back(BreakdownFromJson(b));
    }
    const json& decision = doc.at("decision");
    if (!decision.is_null()) {
      DecisionReport d;
      for (const json& res : decision.at("results")) {
        StrategyResult sr;
        sr.strategy = StrategyFromJson(res.at("strategy"));
        sr.max_batch = res.at("max_batch").get<std::uint64_t>();
        sr.score = Score(res.at("score_num").get<std::uint64_t>(),
                         res.at("score_den").get<std::uint64_t>());
        if (!res.at("breakdown_at_max").is_null()) {
          sr.breakdown_at_max = BreakdownFromJson(res.at("breakdown_at_max"));
        }
        d.results.push_back(std::move(sr));
      }
      d.chosen = StrategyFromJson(decision.at("chosen"));
      d.chosen_batch = decision.at("chosen_batch").get<std::uint64_t>();
      r.decision = std::move(d);
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("output record: {}", e.what()));
  } catch (const ValidationError& e) {
    throw ParseError(fmt::format("output record: {}", e.what()));
  }
}

std::string RenderText(const OutputRecord& r) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };
  line(fmt::format("model      {}{}", r.model_name,
                   r.lm_head_tied ? " (lm_head tied to input embedding)" : ""));
  line(fmt::format("gpus       {} x {} MB, page {} B", r.hw.gpu_n,
                   FormatMb(r.hw.m_total), r.hw.cu_p));
  line(fmt::format("m_base     {} MB ({})", FormatMb(r.hw.m_base),
                   r.m_base_calibrated ? "calibrated" : "default placeholder"));
  line(fmt::format("seq_len    {}{}", r.seq_len,
                   r.batch_size ? fmt::format(", batch_size {}", *r.batch_size)
                                : std::string()));
  line(fmt::format("chunk_size {} elements", r.chunk.chunk_size));

  for (const auto& b : r.estimates) {
    line("");
    line(fmt::format("strategy {}", ToString(b.strategy)));
    line(fmt::format("  {:<20} {:>16} {:>12}", "component", "bytes", "MB"));
    for (const auto& [name, field] : kBreakdownFields) {
      line(fmt::format("  {:<20} {:>16} {:>12}", name, b.*field,
                       FormatMb(b.*field)));
    }
    if (r.lm_head_tied) {
      const Bytes shared = b.peak - std::min(b.peak, r.lm_p);
      line(fmt::format("  {:<20} {:>16} {:>12}", "peak (lm_p shared)", shared,
                       FormatMb(shared)));
    }
    line(fmt::format("  -> {}", b.peak <= r.hw.m_total
                                    ? "fits"
                                    : "predicted out of memory"));
  }

  if (r.decision) {
    line("");
    line(fmt::format("  {:<14} {:>10} {:>10} {:>14}", "strategy", "max_batch",
                     "score", "peak MB"));
    for (const auto& res : r.decision->results) {
      line(fmt::format(
          "  {:<14} {:>10} {:>10} {:>14}", ToString(res.strategy),
          res.max_batch, res.score.ToString(),
          res.breakdown_at_max ? FormatMb(res.breakdown_at_max->peak) : "-"));
    }
    if (r.decision->chosen.kind == StrategyKind::kCpuOffload) {
      line("selected   cpu_offload (no GPU strategy fits at batch size 1)");
    } else {
      line(fmt::format("selected   {} at batch size {}",
                       ToString(r.decision->chosen), r.decision->chosen_batch));
    }
  }
  return out;
}

void WriteSweepCsv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "seq_len,gpu_n,cdp_max_batch,cdp_peak_mb,adp_max_batch,adp_peak_mb,"
         "tp_max_batch,tp_peak_mb,hybrid,hybrid_max_batch,hybrid_peak_mb,"
         "chosen,chosen_batch,error\n";
  auto peak = [](const StrategyResult& r) {
    return r.breakdown_at_max ? FormatMb(r.breakdown_at_max->peak)
                              : std::string();
  };
  for (const auto& cell : cells) {
    std::array<std::string, 9> cols;  // cdp, adp, tp, hybrid triples
    std::string chosen;
    std::string chosen_batch;
    if (cell.report) {
      const StrategyResult* best_hybrid = nullptr;
      for (const auto& r : cell.report->results) {
        switch (r.strategy.kind) {
          case StrategyKind::kCdp:
            cols[0] = std::to_string(r.max_batch);
            cols[1] = peak(r);
            break;
          case StrategyKind::kAdp:
            cols[2] = std::to_string(r.max_batch);
            cols[3] = peak(r);
            break;
          case StrategyKind::kTp:
            cols[4] = std::to_string(r.max_batch);
            cols[5] = peak(r);
            break;
          case StrategyKind::kHybrid:
            if (best_hybrid == nullptr || r.score > best_hybrid->score) {
              best_hybrid = &r;
            }
            break;
          case StrategyKind::kCpuOffload:
            break;
        }
      }
      if (best_hybrid != nullptr) {
        cols[6] = fmt::format("{}x{}", best_hybrid->strategy.dp_n,
                              best_hybrid->strategy.tp_n);
        cols[7] = std::to_string(best_hybrid->max_batch);
        cols[8] = peak(*best_hybrid);
      }
      chosen = ToString(cell.report->chosen);
      chosen_batch = std::to_string(cell.report->chosen_batch);
    }
    out << cell.seq_len << ',' << cell.gpu_n;
    for (const auto& c : cols) out << ',' << c;
    out << ',' << chosen << ',' << chosen_batch << ',' << CsvEscape(cell.error)
        << '\n';
  }
}

}  // namespace memplan
