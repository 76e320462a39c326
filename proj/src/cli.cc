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

#include "memplan/cli.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "memplan/errors.h"
#include "memplan/estimator.h"
#include "memplan/model_ingest.h"
#include "memplan/planner.h"
#include "memplan/report.h"

namespace memplan {

Bytes ParseMemorySize(std::string_view text, const std::string& field) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data()) {
    throw ValidationError(field, fmt::format("cannot parse size '{}'", text));
  }
  std::string suffix(ptr, text.data() + text.size());
  std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  Bytes unit = 0;
  if (suffix.empty() || suffix == "b") {
    unit = 1;
  } else if (suffix == "mb" || suffix == "mib" || suffix == "m") {
    unit = kMiB;
  } else if (suffix == "gb" || suffix == "gib" || suffix == "g") {
    unit = kGiB;
  } else {
    throw ValidationError(field, fmt::format("unknown size suffix in '{}'", text));
  }
  try {
    return CheckedMul(value, unit);
  } catch (const std::overflow_error&) {
    throw ValidationError(field, fmt::format("size '{}' is too large", text));
  }
}

namespace {

struct CommonFlags {
  std::string model_path;
  std::uint32_t gpus = 1;
  std::string gpu_mem;
  std::uint64_t seq_len = 512;
  std::optional<std::uint64_t> chunk_size;
  std::optional<std::string> m_base;
  std::optional<std::string> page_size;
  std::string format = "text";
};

struct PlanFlags {
  std::uint64_t bs_cap = kDefaultBatchCap;
  std::string hybrid = "all";
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--model", f.model_path, "Model manifest (JSON)")->required();
  cmd->add_option("--gpus", f.gpus, "Number of GPUs")->capture_default_str();
  cmd->add_option("--gpu-mem", f.gpu_mem,
                  "Per-GPU capacity: bytes, or with MB/GB suffix (2^20/2^30)")
      ->required();
  cmd->add_option("--seq-len", f.seq_len, "Sequence length")
      ->capture_default_str();
  cmd->add_option("--chunk-size", f.chunk_size,
                  "Chunk size in elements (default: least-waste search)");
  cmd->add_option("--m-base", f.m_base,
                  "Measured baseline usage per GPU (default: 1GB placeholder)");
  cmd->add_option("--page-size", f.page_size,
                  "Allocator page size in bytes (env MEMPLAN_PAGE_SIZE)");
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

void AddPlanFlags(CLI::App* cmd, PlanFlags& f) {
  cmd->add_option("--bs-cap", f.bs_cap, "Upper bound of the batch search")
      ->capture_default_str();
  cmd->add_option("--hybrid", f.hybrid,
                  "Hybrid layouts to evaluate: all factorizations or the "
                  "single balanced one")
      ->check(CLI::IsMember({"all", "single"}))
      ->capture_default_str();
}

PlannerOptions ToOptions(const PlanFlags& f) {
  return PlannerOptions{
      f.bs_cap, f.hybrid == "single" ? HybridMode::kSingle : HybridMode::kAll};
}

// Resolved inputs shared by every command.
struct Context {
  ModelManifest manifest;
  ChunkConfig chunk;
  HardwareProfile hw;
  bool m_base_calibrated = false;
};

Context Resolve(const CommonFlags& f) {
  Context ctx;
  ctx.manifest = LoadManifest(f.model_path);
  ctx.hw.gpu_n = f.gpus;
  ctx.hw.m_total = ParseMemorySize(f.gpu_mem, "--gpu-mem");
  if (f.page_size) {
    ctx.hw.cu_p = ParseMemorySize(*f.page_size, "--page-size");
  } else if (const char* env = std::getenv(kPageSizeEnv); env && *env) {
    ctx.hw.cu_p = ParseMemorySize(env, kPageSizeEnv);
  }
  if (f.m_base) {
    ctx.hw.m_base = ParseMemorySize(*f.m_base, "--m-base");
    ctx.m_base_calibrated = true;
  }
  try {
    Validate(ctx.hw);
  } catch (const ValidationError& e) {
    static const std::map<std::string, std::string> kFlag = {
        {"gpu_n", "--gpus"}, {"m_total", "--gpu-mem"}, {"cu_p", "--page-size"}};
    auto it = kFlag.find(e.field());
    throw ValidationError(it != kFlag.end() ? it->second : e.field(), e.what());
  }
  if (f.seq_len < 2) throw ValidationError("--seq-len", "must be >= 2");
  if (f.chunk_size) {
    ctx.chunk = ChunkConfig{*f.chunk_size};
    Validate(ctx.chunk);
  } else {
    const auto candidates = DefaultChunkCandidates();
    ctx.chunk = ChooseChunkSize(ctx.manifest.profile, candidates);
  }
  return ctx;
}

OutputRecord BaseRecord(const std::string& command, const Context& ctx,
                        std::uint64_t seq_len) {
  OutputRecord r;
  r.command = command;
  r.model_name = ctx.manifest.name;
  r.lm_head_tied = ctx.manifest.lm_head_tied();
  r.lm_p = ctx.manifest.profile.lm_p;
  r.hw = ctx.hw;
  r.m_base_calibrated = ctx.m_base_calibrated;
  r.seq_len = seq_len;
  r.chunk = ctx.chunk;
  r.precision = ctx.manifest.precision;
  return r;
}

void Emit(const OutputRecord& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << ToJson(r).dump(2) << '\n';
  } else {
    out << RenderText(r);
  }
}

int RunEstimate(const CommonFlags& f, std::uint64_t batch_size,
                const std::string& strategy_text, std::ostream& out) {
  const Context ctx = Resolve(f);
  const StrategySpec strategy = ParseStrategy(strategy_text, ctx.hw.gpu_n);
  if (batch_size < 1) throw ValidationError("--batch-size", "must be >= 1");
  OutputRecord r = BaseRecord("estimate", ctx, f.seq_len);
  r.batch_size = batch_size;
  r.estimates.push_back(EstimatePeak(strategy, ctx.manifest.profile, ctx.chunk,
                                     ctx.manifest.precision,
                                     RunConfig{batch_size, f.seq_len}, ctx.hw));
  Emit(r, f.format, out);
  return r.estimates.front().peak <= ctx.hw.m_total ? kExitOk
                                                    : kExitPredictedOom;
}

int RunPlan(const CommonFlags& f, const PlanFlags& p, std::ostream& out) {
  const Context ctx = Resolve(f);
  OutputRecord r = BaseRecord("plan", ctx, f.seq_len);
  r.decision = Decide(ctx.manifest.profile, ctx.chunk, ctx.manifest.precision,
                      f.seq_len, ctx.hw, ToOptions(p));
  Emit(r, f.format, out);
  return r.decision->chosen.kind == StrategyKind::kCpuOffload
             ? kExitPredictedOom
             : kExitOk;
}

int RunSweep(const CommonFlags& f, const PlanFlags& p,
             std::vector<std::uint64_t> seq_lens,
             std::vector<std::uint32_t> gpu_counts,
             const std::optional<std::string>& output, std::ostream& out,
             std::ostream& err) {
  if (seq_lens.empty()) seq_lens = {f.seq_len};
  if (gpu_counts.empty()) gpu_counts = {f.gpus};
  const Context ctx = Resolve(f);
  const auto cells = Sweep(ctx.manifest.profile, ctx.chunk,
                           ctx.manifest.precision, ctx.hw, seq_lens,
                           gpu_counts, ToOptions(p));
  if (output) {
    std::ofstream file(*output, std::ios::binary);
    if (!file) {
      throw ValidationError("--output", fmt::format("cannot write '{}'", *output));
    }
    WriteSweepCsv(file, cells);
  } else {
    WriteSweepCsv(out, cells);
  }
  const bool all_failed = std::all_of(cells.begin(), cells.end(),
                                      [](const SweepCell& c) { return !c.report; });
  if (all_failed) {
    err << "memplan: every sweep cell failed\n";
    return kExitInputError;
  }
  return kExitOk;
}

struct ManifestFlags {
  std::string name = "derived";
  ArchitectureSpec arch;
  bool no_bias_norm = false;
  std::optional<std::uint32_t> half_bytes;
  std::optional<std::uint32_t> full_bytes;
  std::optional<std::uint32_t> lm_head_bytes;
  std::optional<std::string> output;
};

int RunManifest(ManifestFlags m, std::ostream& out) {
  m.arch.bias_and_norm = !m.no_bias_norm;
  m.arch.half_bytes = m.half_bytes;
  m.arch.full_bytes = m.full_bytes;
  m.arch.lm_head_bytes = m.lm_head_bytes;
  const ModelManifest manifest = DeriveManifest(m.arch, m.name);
  if (m.output) {
    SaveManifest(manifest, *m.output);
  } else {
    out << ManifestToJson(manifest).dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Peak GPU memory estimator and fine-tuning strategy planner",
               "memplan"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags estimate_flags;
  std::uint64_t batch_size = 0;
  std::string strategy = "cdp";
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate peak memory of one strategy at one batch size");
  AddCommonFlags(estimate, estimate_flags);
  estimate->add_option("--batch-size", batch_size, "Batch size")->required();
  estimate->add_option("--strategy", strategy, "cdp | adp | tp | hybrid:DPxTP")
      ->capture_default_str();

  CommonFlags plan_flags;
  PlanFlags plan_opts;
  auto* plan = app.add_subcommand(
      "plan", "Find the largest batch per strategy and pick the fastest");
  AddCommonFlags(plan, plan_flags);
  AddPlanFlags(plan, plan_opts);

  CommonFlags sweep_flags;
  PlanFlags sweep_opts;
  std::vector<std::uint64_t> seq_lens;
  std::vector<std::uint32_t> gpu_counts;
  std::optional<std::string> sweep_output;
  auto* sweep = app.add_subcommand(
      "sweep", "Run the planner over a sequence-length x GPU-count grid (CSV)");
  AddCommonFlags(sweep, sweep_flags);
  AddPlanFlags(sweep, sweep_opts);
  sweep->add_option("--seq-lens", seq_lens, "Comma-separated sequence lengths")
      ->delimiter(',');
  sweep->add_option("--gpu-counts", gpu_counts, "Comma-separated GPU counts")
      ->delimiter(',');
  sweep->add_option("--output,-o", sweep_output, "Write CSV to a file");

  ManifestFlags mf;
  auto* manifest = app.add_subcommand(
      "manifest", "Derive a model manifest from decoder hyperparameters");
  manifest->add_option("--name", mf.name, "Model name")->capture_default_str();
  manifest->add_option("--vocab", mf.arch.vocab_size, "Vocabulary size")
      ->required();
  manifest->add_option("--hidden", mf.arch.hidden_size, "Hidden size")
      ->required();
  manifest->add_option("--layers", mf.arch.num_layers, "Decoder layers")
      ->required();
  manifest->add_option("--heads", mf.arch.num_attention_heads,
                       "Attention heads")
      ->required();
  manifest->add_option("--embeddings", mf.arch.num_embeddings,
                       "Embedding operators (word + position = 2)")
      ->capture_default_str();
  manifest->add_option("--ffn-mult", mf.arch.ffn_multiplier,
                       "MLP width / hidden size")
      ->capture_default_str();
  manifest->add_option("--max-positions", mf.arch.max_positions,
                       "Rows of each extra embedding (0: vocab size)");
  manifest->add_flag("--tie-lm-head", mf.arch.tie_lm_head,
                     "lm_head shares the input embedding");
  manifest->add_flag("--no-bias-norm", mf.no_bias_norm,
                     "Omit bias and layernorm operators");
  manifest->add_option("--half-bytes", mf.half_bytes, "Low-precision bytes");
  manifest->add_option("--full-bytes", mf.full_bytes, "Full-precision bytes");
  manifest->add_option("--lm-head-bytes", mf.lm_head_bytes,
                       "Bytes per logit element (default: half bytes)");
  manifest->add_option("--output,-o", mf.output, "Write manifest to a file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*estimate) return RunEstimate(estimate_flags, batch_size, strategy, out);
    if (*plan) return RunPlan(plan_flags, plan_opts, out);
    if (*sweep) {
      return RunSweep(sweep_flags, sweep_opts, std::move(seq_lens),
                      std::move(gpu_counts), sweep_output, out, err);
    }
    if (*manifest) return RunManifest(mf, out);
  } catch (const std::exception& e) {
    err << "memplan: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace memplan
