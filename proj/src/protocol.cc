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

#include "docgraph/protocol.h"

#include "docgraph/error.h"

namespace docgraph {
namespace {

std::vector<RawDocument> admit(std::vector<RawDocument> docs, const ProtocolPreset& preset,
                               const std::string& role) {
  if (preset.filter_to_classes) return filter_by_class(std::move(docs), preset.classes);
  for (const RawDocument& d : docs) {
    if (!preset.classes.contains(d.label)) {
      throw ConfigError(role + " document " + d.id + " has label \"" + d.label +
                        "\" outside the " + preset.name + " classes");
    }
  }
  return docs;
}

}  // namespace

ProtocolPreset protocol_preset(std::string_view name) {
  if (name == "two_way") return ProtocolPreset{"two_way", ClassSet::two_way(), true, false, 0.8};
  if (name == "four_way") return ProtocolPreset{"four_way", ClassSet::four_way(), false, true, 0.8};
  throw ConfigError("unknown protocol: " + std::string(name));
}

PreparedData prepare_protocol(const ProtocolPreset& preset, ProtocolInputs inputs,
                              std::size_t min_frequency, const EncodeOptions& caps,
                              std::uint64_t seed) {
  std::vector<RawDocument> train = admit(std::move(inputs.train), preset, "training");
  std::vector<RawDocument> dev;
  if (preset.split_training_file) {
    if (inputs.dev) {
      throw ConfigError(preset.name + " derives its dev set from the training file; drop --dev");
    }
    std::vector<std::size_t> labels;
    labels.reserve(train.size());
    for (const RawDocument& d : train) labels.push_back(*preset.classes.find(d.label));
    const auto [train_idx, dev_idx] = stratified_split(labels, preset.train_ratio, seed);
    std::vector<RawDocument> kept;
    for (std::size_t i : train_idx) kept.push_back(train[i]);
    for (std::size_t i : dev_idx) dev.push_back(train[i]);
    train = std::move(kept);
  } else {
    if (!inputs.dev) throw ConfigError(preset.name + " needs a dev file (--dev)");
    dev = admit(std::move(*inputs.dev), preset, "dev");
  }
  if (train.empty()) throw ConfigError("no training documents for " + preset.name);
  if (dev.empty()) throw ConfigError("no dev documents for " + preset.name);

  PreparedData out;
  out.vocabulary = build_vocab(train, min_frequency);
  auto encode = [&](const std::vector<RawDocument>& raw) {
    EncodedCorpus encoded = encode_corpus(raw, out.vocabulary, preset.classes, caps);
    out.dropped += encoded.dropped;
    return std::move(encoded.documents);
  };
  out.train = encode(train);
  out.dev = encode(dev);
  for (auto& [name, docs] : inputs.tests) {
    out.tests.emplace_back(name, encode(admit(std::move(docs), preset, "test")));
  }
  return out;
}

}  // namespace docgraph
