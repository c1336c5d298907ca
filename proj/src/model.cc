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

#include "docgraph/model.h"

#include <utility>

#include "docgraph/error.h"
#include "docgraph/init.h"
#include "docgraph/random.h"

namespace docgraph {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kCnn: return "cnn";
    case Variant::kLstm: return "lstm";
    case Variant::kGcn: return "gcn";
    case Variant::kGcnSs: return "gcn_ss";
    case Variant::kGcnAttn: return "gcn_attn";
    case Variant::kGcnAttnSs: return "gcn_attn_ss";
    case Variant::kGat: return "gat";
    case Variant::kGat2: return "gat2";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  throw ConfigError("unknown model variant: " + std::string(name));
}

bool is_graph_variant(Variant v) { return v != Variant::kCnn && v != Variant::kLstm; }

bool uses_edge_weights(Variant v) { return v == Variant::kGcnSs || v == Variant::kGcnAttnSs; }

bool produces_attention(Variant v) {
  return v == Variant::kGcnAttn || v == Variant::kGcnAttnSs || v == Variant::kGat ||
         v == Variant::kGat2;
}

std::size_t gat_heads(Variant v) {
  if (v == Variant::kGat) return 1;
  if (v == Variant::kGat2) return 2;
  return 0;
}

std::size_t ModelConfig::pooled_dim() const {
  if (!is_graph_variant(variant)) return hidden_dim;
  const std::size_t heads = gat_heads(variant);
  return heads == 0 ? node_dim : heads * node_dim;
}

void ModelConfig::validate() const {
  if (class_names.size() < 2) throw ConfigError("model needs at least two classes");
  if (vocab_size < 2) throw ConfigError("vocabulary must hold at least the reserved tokens");
  if (embed_dim == 0 || hidden_dim == 0 || node_dim == 0) {
    throw ConfigError("model dimensions must be positive");
  }
  if (gcn_layers == 0) throw ConfigError("gcn_layers must be at least 1");
  if (max_sentences == 0 || max_tokens == 0) throw ConfigError("length caps must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (clip_norm < 0.0) throw ConfigError("clip_norm must be non-negative");
  ClassSet check(class_names);
}

Model::Model(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  Rng rng(config_.seed);
  const ModelConfig& c = config_;
  switch (c.variant) {
    case Variant::kCnn:
      cnn_embedding_ = &store_.add("cnn.embedding", xavier_uniform(c.vocab_size, c.embed_dim, rng));
      cnn_filter_ = &store_.add("cnn.filter", xavier_uniform(3 * c.embed_dim, c.hidden_dim, rng));
      cnn_bias_ = &store_.add("cnn.bias", Tensor(1, c.hidden_dim));
      break;
    case Variant::kLstm:
      encoder_ = add_encoder_params(store_, "doc_lstm", c.vocab_size, c.embed_dim, c.hidden_dim, rng);
      break;
    default: {
      encoder_ = add_encoder_params(store_, "encoder", c.vocab_size, c.embed_dim, c.hidden_dim, rng);
      const std::size_t heads = gat_heads(c.variant);
      if (heads == 0) {
        for (std::size_t l = 0; l < c.gcn_layers; ++l) {
          const std::size_t in = l == 0 ? c.hidden_dim : c.node_dim;
          gcn_.push_back({&store_.add("gcn." + std::to_string(l) + ".weight",
                                      xavier_uniform(in, c.node_dim, rng))});
        }
        if (produces_attention(c.variant)) {
          self_attn_.query = &store_.add("attention.query", xavier_uniform(c.node_dim, c.node_dim, rng));
          self_attn_.key = &store_.add("attention.key", xavier_uniform(c.node_dim, c.node_dim, rng));
          self_attn_.value = &store_.add("attention.value", xavier_uniform(c.node_dim, c.node_dim, rng));
        }
      } else {
        for (std::size_t h = 0; h < heads; ++h) {
          const std::string prefix = "gat.head" + std::to_string(h);
          GatHeadParams head;
          head.weight = &store_.add(prefix + ".weight", xavier_uniform(c.hidden_dim, c.node_dim, rng));
          head.attention = &store_.add(prefix + ".attention",
                                       xavier_uniform(1, 2 * c.node_dim, 2 * c.node_dim, 1, rng));
          heads_.push_back(head);
        }
      }
      break;
    }
  }
  projection_weight_ =
      &store_.add("projection.weight", xavier_uniform(c.pooled_dim(), c.num_classes(), rng));
  projection_bias_ = &store_.add("projection.bias", Tensor(1, c.num_classes()));
}

ForwardResult Model::forward(Tape& tape, const Document& doc, const EdgeWeightSet* weights) const {
  if (doc.sentences.empty()) throw ShapeError("document " + doc.id + " has no sentences");
  for (const TokenIds& sentence : doc.sentences) {
    for (std::int32_t id : sentence) {
      if (id < 0 || static_cast<std::size_t>(id) >= config_.vocab_size) {
        throw ConfigError("document " + doc.id + " holds token id " + std::to_string(id) +
                          " outside the model vocabulary of " + std::to_string(config_.vocab_size));
      }
    }
  }
  ForwardResult result;
  Var pooled;
  switch (config_.variant) {
    case Variant::kCnn: pooled = cnn_forward(tape, doc); break;
    case Variant::kLstm: pooled = lstm_forward(tape, doc); break;
    default: pooled = graph_forward(tape, doc, weights, result.attention); break;
  }
  result.logits = add(matmul(pooled, tape.parameter(*projection_weight_)),
                      tape.parameter(*projection_bias_));
  return result;
}

Tensor Model::logits(const Document& doc, const EdgeWeightSet* weights) const {
  Tape tape;
  return forward(tape, doc, weights).logits.value();
}

Var Model::graph_forward(Tape& tape, const Document& doc, const EdgeWeightSet* weights,
                         std::vector<Var>& attention) const {
  const ModelConfig& c = config_;
  if (uses_edge_weights(c.variant) && weights == nullptr) {
    throw ConfigError(std::string(variant_name(c.variant)) + " requires edge weights");
  }
  const Var features = encode_document(doc, bind(tape, encoder_));
  // GAT learns its own edge weights; E only marks connectivity there.
  const EdgeWeightSet* edge_source = uses_edge_weights(c.variant) ? weights : nullptr;
  const DocumentGraph graph = build_graph(doc, features, edge_source);
  const bool degenerate = graph.n == 1;

  if (!heads_.empty()) {
    std::vector<GatHeadVars> heads;
    for (const GatHeadParams& h : heads_) heads.push_back(bind(tape, h));
    if (degenerate) {
      std::vector<Var> outputs;
      for (const GatHeadVars& h : heads) outputs.push_back(matmul(features, h.weight));
      return max_over_rows(outputs.size() == 1 ? outputs.front() : concat_cols(outputs));
    }
    MultiHeadOutput out =
        multi_head(Mask::from_adjacency(graph.adjacency), features, heads, c.leaky_slope);
    attention = std::move(out.attention);
    return max_over_rows(out.output);
  }

  const Var adjacency = tape.constant(c.normalize_adjacency ? row_normalized(graph.adjacency)
                                                            : graph.adjacency);
  Var nodes = features;
  for (const GcnParams& layer : gcn_) {
    const Var weight = tape.parameter(*layer.weight);
    nodes = degenerate ? matmul(nodes, weight) : gcn_layer(adjacency, nodes, weight, c.leaky_slope);
  }
  if (self_attn_.query != nullptr) {
    AttentionOutput out = self_attention(nodes, bind(tape, self_attn_));
    attention.push_back(out.attention);
    nodes = out.output;
  }
  return max_over_rows(nodes);
}

Var Model::cnn_forward(Tape& tape, const Document& doc) const {
  const TokenIds tokens = doc.flattened();
  const Var embedded = gather_rows(tape.parameter(*cnn_embedding_), tokens);
  // Width-3 windows with one zero row of padding at each end.
  const Var windows[] = {shift_rows(embedded, -1), embedded, shift_rows(embedded, 1)};
  const Var conv = add(matmul(concat_cols(windows), tape.parameter(*cnn_filter_)),
                       tape.parameter(*cnn_bias_));
  return max_over_rows(leaky_relu(conv, config_.leaky_slope));
}

Var Model::lstm_forward(Tape& tape, const Document& doc) const {
  const EncoderVars vars = bind(tape, encoder_);
  return lstm_last_hidden(embed(doc.flattened(), vars), vars.lstm);
}

Var loss(Var logits, std::size_t label) { return cross_entropy_logits(logits, label); }

}  // namespace docgraph
