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

#ifndef DOCGRAPH_PROTOCOL_H_
#define DOCGRAPH_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docgraph/corpus.h"

namespace docgraph {

// Experimental setups.
//   two_way:  train on the training file's satire and trusted articles, select
//             on the dev file filtered the same way, then score every test
//             file with the selected checkpoint.
//   four_way: all four classes; a stratified 80:20 split of the training file
//             supplies train and dev; test files are scored afterwards.
struct ProtocolPreset {
  std::string name;
  ClassSet classes;
  bool filter_to_classes = false;  // drop out-of-set labels instead of failing
  bool split_training_file = false;
  double train_ratio = 0.8;
};

// "two_way" or "four_way"; throws ConfigError otherwise.
ProtocolPreset protocol_preset(std::string_view name);

struct ProtocolInputs {
  std::vector<RawDocument> train;
  std::optional<std::vector<RawDocument>> dev;
  std::vector<std::pair<std::string, std::vector<RawDocument>>> tests;  // (name, docs)
};

struct PreparedData {
  Vocabulary vocabulary;
  std::vector<Document> train;
  std::vector<Document> dev;
  std::vector<std::pair<std::string, std::vector<Document>>> tests;
  std::size_t dropped = 0;  // documents empty after encoding, all sets
};

// Filters or validates labels, splits when the preset says so, builds the
// vocabulary from the training portion only and encodes every set.
PreparedData prepare_protocol(const ProtocolPreset& preset, ProtocolInputs inputs,
                              std::size_t min_frequency, const EncodeOptions& caps,
                              std::uint64_t seed);

}  // namespace docgraph

#endif  // DOCGRAPH_PROTOCOL_H_
