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

#ifndef DOCGRAPH_MODEL_H_
#define DOCGRAPH_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "docgraph/corpus.h"
#include "docgraph/encoder.h"
#include "docgraph/gnn_layers.h"
#include "docgraph/graph.h"
#include "docgraph/tape.h"
#include "docgraph/tensor.h"

namespace docgraph {

enum class Variant { kCnn, kLstm, kGcn, kGcnSs, kGcnAttn, kGcnAttnSs, kGat, kGat2 };

inline constexpr Variant kAllVariants[] = {Variant::kCnn,     Variant::kLstm,       Variant::kGcn,
                                           Variant::kGcnSs,   Variant::kGcnAttn,    Variant::kGcnAttnSs,
                                           Variant::kGat,     Variant::kGat2};

// CLI names: cnn, lstm, gcn, gcn_ss, gcn_attn, gcn_attn_ss, gat, gat2.
std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

bool is_graph_variant(Variant v);
bool uses_edge_weights(Variant v);
bool produces_attention(Variant v);
std::size_t gat_heads(Variant v);  // 0 for non-GAT variants

struct ModelConfig {
  Variant variant = Variant::kGcn;
  std::vector<std::string> class_names;
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 100;
  std::size_t hidden_dim = 100;  // LSTM width and CNN filter count
  std::size_t node_dim = 32;
  std::size_t gcn_layers = 1;
  bool normalize_adjacency = false;
  double leaky_slope = 0.2;
  std::uint64_t seed = 0;
  double learning_rate = 0.001;
  std::size_t max_epochs = 10;
  std::size_t max_sentences = 64;
  std::size_t max_tokens = 64;
  std::size_t min_frequency = 2;
  double clip_norm = 0.0;  // 0 disables clipping

  std::size_t num_classes() const { return class_names.size(); }
  ClassSet classes() const { return ClassSet(class_names); }
  EncodeOptions encode_options() const { return {max_sentences, max_tokens}; }
  // Width of the pooled document vector fed to the projection.
  std::size_t pooled_dim() const;
  // Throws ConfigError on non-positive dimensions or fewer than two classes.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ForwardResult {
  Var logits;                  // 1 x C
  std::vector<Var> attention;  // one n x n matrix per head; empty if none
};

// One of the eight variants with its named parameters. Parameters are created
// in a fixed order from config.seed, so the initial values are a pure
// function of the config.
class Model {
 public:
  explicit Model(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  ParameterStore& parameters() { return store_; }
  const ParameterStore& parameters() const { return store_; }

  // Records the forward pass on `tape`. Graph variants run
  // encoder -> graph -> GNN (-> self-attention) -> max-pool -> projection.
  // A single-sentence document skips message passing: each GCN layer or GAT
  // head applies only its weight matrix to the node features.
  ForwardResult forward(Tape& tape, const Document& doc, const EdgeWeightSet* weights) const;

  // Logits without keeping the tape.
  Tensor logits(const Document& doc, const EdgeWeightSet* weights) const;

 private:
  Var graph_forward(Tape& tape, const Document& doc, const EdgeWeightSet* weights,
                    std::vector<Var>& attention) const;
  Var cnn_forward(Tape& tape, const Document& doc) const;
  Var lstm_forward(Tape& tape, const Document& doc) const;

  ModelConfig config_;
  ParameterStore store_;
  EncoderParams encoder_;
  std::vector<GcnParams> gcn_;
  SelfAttnParams self_attn_;
  std::vector<GatHeadParams> heads_;
  Parameter* cnn_embedding_ = nullptr;
  Parameter* cnn_filter_ = nullptr;
  Parameter* cnn_bias_ = nullptr;
  Parameter* projection_weight_ = nullptr;
  Parameter* projection_bias_ = nullptr;
};

// Cross-entropy of the logits against the gold class.
Var loss(Var logits, std::size_t label);

}  // namespace docgraph

#endif  // DOCGRAPH_MODEL_H_
