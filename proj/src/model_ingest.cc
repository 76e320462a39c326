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

#include "memplan/model_ingest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "memplan/arith.h"
#include "memplan/errors.h"

namespace memplan {

using nlohmann::json;

void Validate(const ArchitectureSpec& arch) {
  if (arch.vocab_size < 1) throw ValidationError("vocab_size", "must be >= 1");
  if (arch.hidden_size < 1) throw ValidationError("hidden_size", "must be >= 1");
  if (arch.num_layers < 1) throw ValidationError("num_layers", "must be >= 1");
  if (arch.num_embeddings < 1) {
    throw ValidationError("num_embeddings", "must be >= 1");
  }
  if (arch.num_attention_heads < 1) {
    throw ValidationError("num_attention_heads", "must be >= 1");
  }
  if (arch.hidden_size % arch.num_attention_heads != 0) {
    throw ValidationError(
        "num_attention_heads",
        fmt::format("hidden_size {} is not divisible by {} heads",
                    arch.hidden_size, arch.num_attention_heads));
  }
  FfnWidth(arch);
}

std::uint64_t FfnWidth(const ArchitectureSpec& arch) {
  if (!(arch.ffn_multiplier > 0.0) || !std::isfinite(arch.ffn_multiplier)) {
    throw ValidationError("ffn_multiplier", "must be a positive number");
  }
  const double width =
      arch.ffn_multiplier * static_cast<double>(arch.hidden_size);
  const double rounded = std::round(width);
  if (std::abs(width - rounded) > 1e-6 || rounded < 1.0) {
    throw ValidationError(
        "ffn_multiplier",
        fmt::format("{} x {} is not a whole number of features",
                    arch.ffn_multiplier, arch.hidden_size));
  }
  return static_cast<std::uint64_t>(rounded);
}

ModelProfile DeriveProfile(const ArchitectureSpec& arch) {
  Validate(arch);
  const std::uint64_t h = arch.hidden_size;
  const std::uint64_t ffn = FfnWidth(arch);
  const std::uint32_t half =
      arch.half_bytes.value_or(PrecisionSpec{}.half_bytes);

  ModelProfile p;
  p.dict_n = arch.vocab_size;
  p.o_n = h;
  p.l_n = arch.num_layers;
  p.e_n = arch.num_embeddings;

  auto add = [&p](std::string name, OperatorKind kind, std::uint64_t count) {
    p.operators.push_back({std::move(name), kind, count});
    if (kind == OperatorKind::kEmbedding) {
      p.embed_p = CheckedAdd(p.embed_p, count);
    } else {
      p.other_p = CheckedAdd(p.other_p, count);
    }
  };

  add("embed_tokens", OperatorKind::kEmbedding, CheckedMul(arch.vocab_size, h));
  const std::uint64_t extra_rows =
      arch.max_positions > 0 ? arch.max_positions : arch.vocab_size;
  for (std::uint64_t e = 1; e < arch.num_embeddings; ++e) {
    std::string name =
        e == 1 ? "embed_positions" : fmt::format("embed_extra_{}", e);
    add(std::move(name), OperatorKind::kEmbedding, CheckedMul(extra_rows, h));
  }

  for (std::uint64_t l = 0; l < arch.num_layers; ++l) {
    const std::string prefix = fmt::format("layers.{}", l);
    for (const char* proj : {"q_proj", "k_proj", "v_proj", "out_proj"}) {
      add(fmt::format("{}.self_attn.{}", prefix, proj), OperatorKind::kLinear,
          CheckedMul(h, h));
      if (arch.bias_and_norm) {
        add(fmt::format("{}.self_attn.{}.bias", prefix, proj),
            OperatorKind::kBias, h);
      }
    }
    if (arch.bias_and_norm) {
      add(prefix + ".self_attn_layer_norm", OperatorKind::kLayerNorm, 2 * h);
    }
    add(prefix + ".fc1", OperatorKind::kLinear, CheckedMul(h, ffn));
    if (arch.bias_and_norm) add(prefix + ".fc1.bias", OperatorKind::kBias, ffn);
    add(prefix + ".fc2", OperatorKind::kLinear, CheckedMul(ffn, h));
    if (arch.bias_and_norm) {
      add(prefix + ".fc2.bias", OperatorKind::kBias, h);
      add(prefix + ".final_layer_norm", OperatorKind::kLayerNorm, 2 * h);
    }
  }
  if (arch.bias_and_norm) {
    add("final_layer_norm", OperatorKind::kLayerNorm, 2 * h);
  }

  // Tied heads still materialize logits from the same matrix; the bytes are
  // charged and the sharing is reported alongside the estimate.
  p.lm_p = CheckedMul(CheckedMul(arch.vocab_size, h), half);
  return p;
}

ModelManifest DeriveManifest(const ArchitectureSpec& arch, std::string name) {
  ModelManifest m;
  m.name = std::move(name);
  m.precision.half_bytes = arch.half_bytes.value_or(m.precision.half_bytes);
  m.precision.full_bytes = arch.full_bytes.value_or(m.precision.full_bytes);
  m.precision.lm_head_bytes = arch.lm_head_bytes.value_or(m.precision.half_bytes);
  Validate(m.precision);
  m.profile = DeriveProfile(arch);
  m.architecture = arch;
  // Precision now lives in its own block.
  m.architecture.half_bytes.reset();
  m.architecture.full_bytes.reset();
  m.architecture.lm_head_bytes.reset();
  return m;
}

namespace {

const json& Member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path, "missing");
  return *it;
}

std::uint64_t CountAt(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    // Documents built in code hold signed integers even when non-negative.
    if (value.get<std::int64_t>() >= 0) return value.get<std::uint64_t>();
    throw ValidationError(path, fmt::format("must be non-negative, got {}",
                                            value.get<std::int64_t>()));
  }
  throw ValidationError(path, "must be a non-negative integer");
}

std::uint64_t Count(const json& obj, const char* key, const std::string& path) {
  return CountAt(Member(obj, key, path), path);
}

std::uint32_t SmallCount(const json& obj, const char* key,
                         const std::string& path) {
  const std::uint64_t v = Count(obj, key, path);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError(path, "out of range");
  }
  return static_cast<std::uint32_t>(v);
}

const json& ObjectMember(const json& obj, const char* key,
                         const std::string& path) {
  const json& v = Member(obj, key, path);
  if (!v.is_object()) throw ValidationError(path, "must be an object");
  return v;
}

}  // namespace

ModelManifest ParseManifest(const json& doc) {
  if (!doc.is_object()) throw ParseError("manifest: top level must be an object");
  ModelManifest m;

  const json& name = Member(doc, "name", "name");
  if (!name.is_string()) throw ValidationError("name", "must be a string");
  m.name = name.get<std::string>();

  if (doc.contains("precision")) {
    const json& prec = ObjectMember(doc, "precision", "precision");
    m.precision.half_bytes = SmallCount(prec, "half_bytes", "precision.half_bytes");
    m.precision.full_bytes = SmallCount(prec, "full_bytes", "precision.full_bytes");
    m.precision.lm_head_bytes =
        prec.contains("lm_head_bytes")
            ? SmallCount(prec, "lm_head_bytes", "precision.lm_head_bytes")
            : m.precision.half_bytes;
  }
  try {
    Validate(m.precision);
  } catch (const ValidationError& e) {
    throw ValidationError("precision." + e.field(), e.what());
  }

  const json& arch_doc = ObjectMember(doc, "architecture", "architecture");
  ArchitectureSpec& arch = m.architecture;
  arch.vocab_size = Count(arch_doc, "vocab_size", "architecture.vocab_size");
  arch.hidden_size = Count(arch_doc, "hidden_size", "architecture.hidden_size");
  arch.num_layers = Count(arch_doc, "num_layers", "architecture.num_layers");
  arch.num_embeddings =
      Count(arch_doc, "num_embeddings", "architecture.num_embeddings");
  arch.num_attention_heads =
      Count(arch_doc, "num_attention_heads", "architecture.num_attention_heads");
  if (arch_doc.contains("ffn_multiplier")) {
    const json& v = arch_doc["ffn_multiplier"];
    if (!v.is_number()) {
      throw ValidationError("architecture.ffn_multiplier", "must be a number");
    }
    arch.ffn_multiplier = v.get<double>();
  }
  if (arch_doc.contains("tie_lm_head")) {
    const json& v = arch_doc["tie_lm_head"];
    if (!v.is_boolean()) {
      throw ValidationError("architecture.tie_lm_head", "must be a boolean");
    }
    arch.tie_lm_head = v.get<bool>();
  }
  if (arch_doc.contains("max_positions")) {
    arch.max_positions =
        Count(arch_doc, "max_positions", "architecture.max_positions");
  }
  if (arch_doc.contains("bias_and_norm")) {
    const json& v = arch_doc["bias_and_norm"];
    if (!v.is_boolean()) {
      throw ValidationError("architecture.bias_and_norm", "must be a boolean");
    }
    arch.bias_and_norm = v.get<bool>();
  }
  try {
    Validate(arch);
  } catch (const ValidationError& e) {
    throw ValidationError("architecture." + e.field(), e.what());
  }

  ModelProfile& p = m.profile;
  p.dict_n = arch.vocab_size;
  p.o_n = arch.hidden_size;
  p.l_n = arch.num_layers;
  p.e_n = arch.num_embeddings;

  const json& ops = Member(doc, "operators", "operators");
  if (!ops.is_array()) throw ValidationError("operators", "must be an array");
  p.operators.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string path = fmt::format("operators[{}]", i);
    const json& op = ops[i];
    if (!op.is_object()) throw ValidationError(path, "must be an object");
    OperatorRecord rec;
    const json& op_name = Member(op, "name", path + ".name");
    if (!op_name.is_string()) {
      throw ValidationError(path + ".name", "must be a string");
    }
    rec.name = op_name.get<std::string>();
    const json& kind = Member(op, "kind", path + ".kind");
    if (!kind.is_string()) {
      throw ValidationError(path + ".kind", "must be a string");
    }
    rec.kind = ParseOperatorKind(kind.get<std::string>(), path + ".kind");
    rec.param_count = Count(op, "param_count", path + ".param_count");
    p.operators.push_back(std::move(rec));
  }

  p.embed_p = Count(doc, "embed_p", "embed_p");
  p.other_p = Count(doc, "other_p", "other_p");
  p.lm_p = Count(doc, "lm_p_bytes", "lm_p_bytes");
  Validate(p);
  return m;
}

ModelManifest ParseManifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("manifest: {}", e.what()));
  }
  return ParseManifest(doc);
}

ModelManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(fmt::format("manifest: cannot open '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseManifest(std::string_view(buf.str()));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{} ({})", e.what(), path.string()));
  }
}

json ManifestToJson(const ModelManifest& m) {
  json ops = json::array();
  for (const auto& op : m.profile.operators) {
    ops.push_back({{"name", op.name},
                   {"kind", std::string(ToString(op.kind))},
                   {"param_count", op.param_count}});
  }
  const ArchitectureSpec& a = m.architecture;
  json arch = {{"vocab_size", a.vocab_size},
               {"hidden_size", a.hidden_size},
               {"num_layers", a.num_layers},
               {"num_embeddings", a.num_embeddings},
               {"num_attention_heads", a.num_attention_heads},
               {"ffn_multiplier", a.ffn_multiplier},
               {"tie_lm_head", a.tie_lm_head},
               {"max_positions", a.max_positions},
               {"bias_and_norm", a.bias_and_norm}};
  return {{"name", m.name},
          {"precision",
           {{"half_bytes", m.precision.half_bytes},
            {"full_bytes", m.precision.full_bytes},
            {"lm_head_bytes", m.precision.lm_head_bytes}}},
          {"architecture", std::move(arch)},
          {"operators", std::move(ops)},
          {"embed_p", m.profile.embed_p},
          {"other_p", m.profile.other_p},
          {"lm_p_bytes", m.profile.lm_p}};
}

void SaveManifest(const ModelManifest& manifest,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError(fmt::format("manifest: cannot write '{}'", path.string()));
  }
  out << ManifestToJson(manifest).dump(2) << '\n';
}

std::vector<std::uint64_t> DefaultChunkCandidates() {
  std::vector<std::uint64_t> out;
  for (int shift = 20; shift <= 27; ++shift) out.push_back(1ULL << shift);
  return out;
}

ChunkConfig ChooseChunkSize(const ModelProfile& model,
                            std::span<const std::uint64_t> candidates) {
  if (candidates.empty()) {
    throw ValidationError("chunk_candidates", "must not be empty");
  }
  const std::uint64_t min_size = MaxChunkedOperator(model);
  std::optional<std::uint64_t> best;
  std::uint64_t best_waste = 0;
  for (std::uint64_t cs : candidates) {
    if (cs == 0 || cs < min_size) continue;
    const std::uint64_t padded = CheckedMul(CeilDiv(model.other_p, cs), cs);
    const std::uint64_t waste = padded - model.other_p;
    if (!best || waste < best_waste || (waste == best_waste && cs < *best)) {
      best = cs;
      best_waste = waste;
    }
  }
  if (!best) {
    throw ValidationError(
        "chunk_size",
        fmt::format("no candidate holds the largest chunked operator ({} "
                    "elements)",
                    min_size));
  }
  return ChunkConfig{*best};
}

}  // namespace memplan
