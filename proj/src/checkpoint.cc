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

#include "docgraph/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "docgraph/error.h"

namespace docgraph {
namespace {

constexpr std::string_view kMagic = "DOCGRAPH-CKPT\n";

void append_le(std::string& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double read_le(const char* bytes) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[b])) << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void Checkpoint::require_variant(Variant variant) const {
  if (model.config().variant != variant) {
    throw ConfigError("checkpoint holds a " + std::string(variant_name(model.config().variant)) +
                      " model, not " + std::string(variant_name(variant)));
  }
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return {
      {"variant", std::string(variant_name(c.variant))},
      {"class_names", c.class_names},
      {"vocab_size", c.vocab_size},
      {"embed_dim", c.embed_dim},
      {"hidden_dim", c.hidden_dim},
      {"node_dim", c.node_dim},
      {"gcn_layers", c.gcn_layers},
      {"normalize_adjacency", c.normalize_adjacency},
      {"leaky_slope", c.leaky_slope},
      {"seed", c.seed},
      {"learning_rate", c.learning_rate},
      {"max_epochs", c.max_epochs},
      {"max_sentences", c.max_sentences},
      {"max_tokens", c.max_tokens},
      {"min_frequency", c.min_frequency},
      {"clip_norm", c.clip_norm},
  };
}

ModelConfig config_from_json(const nlohmann::json& j) {
  try {
    ModelConfig c;
    c.variant = parse_variant(j.at("variant").get<std::string>());
    c.class_names = j.at("class_names").get<std::vector<std::string>>();
    c.vocab_size = j.at("vocab_size").get<std::size_t>();
    c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    c.node_dim = j.at("node_dim").get<std::size_t>();
    c.gcn_layers = j.at("gcn_layers").get<std::size_t>();
    c.normalize_adjacency = j.at("normalize_adjacency").get<bool>();
    c.leaky_slope = j.at("leaky_slope").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.max_epochs = j.at("max_epochs").get<std::size_t>();
    c.max_sentences = j.at("max_sentences").get<std::size_t>();
    c.max_tokens = j.at("max_tokens").get<std::size_t>();
    c.min_frequency = j.at("min_frequency").get<std::size_t>();
    c.clip_norm = j.at("clip_norm").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid model config: ") + e.what());
  }
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  const ParameterStore& store = checkpoint.model.parameters();
  nlohmann::json directory = nlohmann::json::array();
  for (std::size_t i = 0; i < store.size(); ++i) {
    directory.push_back({{"name", store[i].name},
                         {"rows", store[i].value.rows()},
                         {"cols", store[i].value.cols()}});
  }
  const TrainingMetadata& meta = checkpoint.metadata;
  nlohmann::json manifest = {
      {"format_version", kCheckpointFormatVersion},
      {"config", config_to_json(checkpoint.model.config())},
      {"vocabulary",
       {{"min_frequency", checkpoint.vocabulary.min_frequency()},
        {"tokens", checkpoint.vocabulary.tokens()}}},
      {"parameters", std::move(directory)},
      {"metadata",
       {{"seed", meta.seed},
        {"best_epoch", meta.best_epoch},
        {"best_dev_macro_f1", meta.best_dev_macro_f1},
        {"epochs_run", meta.epochs_run}}},
  };
  std::string out(kMagic);
  out += manifest.dump();
  out.push_back('\n');
  out.reserve(out.size() + 8 * store.scalar_count());
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (double v : store[i].value.values()) append_le(out, v);
  }
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes, const std::string& source) {
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    throw ParseError(source + ": not a docgraph checkpoint");
  }
  bytes.remove_prefix(kMagic.size());
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw ParseError(source + ": truncated manifest");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": unreadable manifest: " + e.what());
  }
  std::string_view payload = bytes.substr(newline + 1);

  try {
    const int version = manifest.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ParseError(source + ": unsupported format version " + std::to_string(version));
    }
    const ModelConfig config = config_from_json(manifest.at("config"));
    const auto& vocab_json = manifest.at("vocabulary");
    auto tokens = vocab_json.at("tokens").get<std::vector<std::string>>();
    if (tokens.size() < 2 || tokens[0] != Vocabulary::kPadToken || tokens[1] != Vocabulary::kUnkToken) {
      throw ParseError(source + ": vocabulary lacks the reserved entries");
    }
    tokens.erase(tokens.begin(), tokens.begin() + 2);
    Vocabulary vocab = Vocabulary::from_tokens(tokens, vocab_json.at("min_frequency").get<std::size_t>());
    if (vocab.size() != config.vocab_size) {
      throw ConfigError(source + ": vocabulary has " + std::to_string(vocab.size()) +
                        " entries, config says " + std::to_string(config.vocab_size));
    }

    Model model(config);
    ParameterStore& store = model.parameters();
    const auto& directory = manifest.at("parameters");
    std::set<std::string> seen;
    for (const auto& entry : directory) {
      const auto name = entry.at("name").get<std::string>();
      if (!seen.insert(name).second) throw ConfigError(source + ": parameter " + name + " listed twice");
      const Parameter* p = store.find(name);
      if (p == nullptr) {
        throw ConfigError(source + ": parameter " + name + " does not belong to a " +
                          std::string(variant_name(config.variant)) + " model");
      }
      if (entry.at("rows").get<std::size_t>() != p->value.rows() ||
          entry.at("cols").get<std::size_t>() != p->value.cols()) {
        throw ConfigError(source + ": parameter " + name + " has the wrong shape for its config");
      }
    }
    for (std::size_t i = 0; i < store.size(); ++i) {
      if (!seen.contains(store[i].name)) {
        throw ConfigError(source + ": missing parameter " + store[i].name);
      }
    }

    std::size_t expected = 0;
    for (const auto& entry : directory) {
      const Parameter& p = store.at(entry.at("name").get<std::string>());
      expected += p.value.size();
    }
    if (payload.size() != 8 * expected) {
      throw ParseError(source + ": payload holds " + std::to_string(payload.size()) +
                       " bytes, expected " + std::to_string(8 * expected));
    }
    // Directory order must be the config's own so the file re-serializes
    // byte for byte.
    for (std::size_t i = 0; i < store.size(); ++i) {
      if (directory[i].at("name").get<std::string>() != store[i].name) {
        throw ConfigError(source + ": parameter directory is out of order");
      }
    }
    std::size_t offset = 0;
    for (const auto& entry : directory) {
      Parameter& p = store.at(entry.at("name").get<std::string>());
      Tensor t(p.value.rows(), p.value.cols());
      for (double& v : t.values()) {
        v = read_le(payload.data() + offset);
        offset += 8;
      }
      p.value = std::move(t);
    }

    const auto& meta_json = manifest.at("metadata");
    TrainingMetadata meta;
    meta.seed = meta_json.at("seed").get<std::uint64_t>();
    meta.best_epoch = meta_json.at("best_epoch").get<std::size_t>();
    meta.best_dev_macro_f1 = meta_json.at("best_dev_macro_f1").get<double>();
    meta.epochs_run = meta_json.at("epochs_run").get<std::size_t>();
    return Checkpoint{std::move(model), std::move(vocab), meta};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": malformed manifest: " + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const std::string bytes = serialize_checkpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes, path.string());
}

}  // namespace docgraph
