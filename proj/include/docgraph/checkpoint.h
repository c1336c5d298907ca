// Copyright 2026 The docgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOCGRAPH_CHECKPOINT_H_
#define DOCGRAPH_CHECKPOINT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "docgraph/corpus.h"
#include "docgraph/model.h"

namespace docgraph {

inline constexpr int kCheckpointFormatVersion = 1;

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  double best_dev_macro_f1 = 0.0;
  std::size_t epochs_run = 0;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct Checkpoint {
  Model model;
  Vocabulary vocabulary;
  TrainingMetadata metadata;

  // Throws ConfigError unless the stored model is `variant`.
  void require_variant(Variant variant) const;
};

nlohmann::json config_to_json(const ModelConfig& config);
ModelConfig config_from_json(const nlohmann::json& json);

// Layout: the line "DOCGRAPH-CKPT", then a one-line JSON manifest (format
// version, config, vocabulary, ordered parameter directory of name and
// shape, training metadata), then every parameter value as a little-endian
// IEEE-754 double in directory order, row-major.
std::string serialize_checkpoint(const Checkpoint& checkpoint);
// Validates the version, the parameter directory against the config and the
// payload length. Throws ParseError or ConfigError.
Checkpoint parse_checkpoint(std::string_view bytes, const std::string& source = "checkpoint");

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace docgraph

#endif  // DOCGRAPH_CHECKPOINT_H_
