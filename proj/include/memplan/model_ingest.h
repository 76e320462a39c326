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

#ifndef MEMPLAN_MODEL_INGEST_H_
#define MEMPLAN_MODEL_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "memplan/types.h"

namespace memplan {

// Decoder hyperparameters. Parameter counting:
//   word embedding          vocab_size x hidden
//   each extra embedding    max_positions x hidden (vocab_size x hidden when
//                           max_positions is 0)
//   per layer, linear       q, k, v, o: hidden^2 each; fc1, fc2: hidden x ffn
//   per layer, bias         q, k, v, o, fc2: hidden; fc1: ffn
//   per layer, layernorm    two, 2 x hidden each
//   final layernorm         2 x hidden
// where ffn = ffn_multiplier x hidden. Biases and layernorms are emitted only
// when `bias_and_norm` is set. lm_p = vocab_size x hidden x half_bytes.
struct ArchitectureSpec {
  std::uint64_t vocab_size = 1;
  std::uint64_t hidden_size = 1;
  std::uint64_t num_layers = 1;
  std::uint64_t num_embeddings = 1;
  std::uint64_t num_attention_heads = 1;
  double ffn_multiplier = 4.0;
  bool tie_lm_head = false;
  std::uint64_t max_positions = 0;
  bool bias_and_norm = true;
  std::optional<std::uint32_t> half_bytes;
  std::optional<std::uint32_t> full_bytes;
  std::optional<std::uint32_t> lm_head_bytes;

  friend bool operator==(const ArchitectureSpec&,
                         const ArchitectureSpec&) = default;
};

void Validate(const ArchitectureSpec& arch);

// Hidden width of the MLP, ffn_multiplier x hidden_size. Throws
// ValidationError when the product is not a whole number.
std::uint64_t FfnWidth(const ArchitectureSpec& arch);

// Contents of a manifest file.
struct ModelManifest {
  std::string name;
  PrecisionSpec precision;
  ArchitectureSpec architecture;
  ModelProfile profile;

  bool lm_head_tied() const { return architecture.tie_lm_head; }

  friend bool operator==(const ModelManifest&, const ModelManifest&) = default;
};

// Builds a manifest (profile plus precision) from hyperparameters.
ModelManifest DeriveManifest(const ArchitectureSpec& arch,
                             std::string name = "derived");

ModelProfile DeriveProfile(const ArchitectureSpec& arch);

// Throws ParseError for malformed input and ValidationError naming the
// offending field for schema or consistency violations.
ModelManifest ParseManifest(const nlohmann::json& doc);
ModelManifest ParseManifest(std::string_view text);
ModelManifest LoadManifest(const std::filesystem::path& path);

nlohmann::json ManifestToJson(const ModelManifest& manifest);
void SaveManifest(const ModelManifest& manifest,
                  const std::filesystem::path& path);

// Powers of two from 2^20 to 2^27 elements.
std::vector<std::uint64_t> DefaultChunkCandidates();

// Picks the candidate that wastes the fewest padding elements when other_p
// is split into chunks, among candidates that can hold the largest chunked
// operator. Ties go to the smaller chunk. Throws ValidationError when no
// candidate is large enough.
ChunkConfig ChooseChunkSize(const ModelProfile& model,
                            std::span<const std::uint64_t> candidates);

}  // namespace memplan

#endif  // MEMPLAN_MODEL_INGEST_H_
