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

#include "docgraph/gnn_layers.h"

#include <cmath>
#include <string>

#include "docgraph/error.h"

namespace docgraph {

SelfAttnVars bind(Tape& tape, const SelfAttnParams& params) {
  return SelfAttnVars{tape.parameter(*params.query), tape.parameter(*params.key),
                      tape.parameter(*params.value)};
}

GatHeadVars bind(Tape& tape, const GatHeadParams& params) {
  return GatHeadVars{tape.parameter(*params.weight), tape.parameter(*params.attention)};
}

Var gcn_preactivation(Var adjacency, Var features, Var weight) {
  if (adjacency.rows() != adjacency.cols() || adjacency.cols() != features.rows()) {
    throw ShapeError("gcn_layer: adjacency " + adjacency.value().shape_string() +
                     " does not match features " + features.value().shape_string());
  }
  return matmul(matmul(adjacency, features), weight);
}

Var gcn_layer(Var adjacency, Var features, Var weight, double slope) {
  return leaky_relu(gcn_preactivation(adjacency, features, weight), slope);
}

AttentionOutput self_attention(Var features, const SelfAttnVars& params) {
  const Var queries = matmul(features, params.query);
  const Var keys = matmul(features, params.key);
  const Var values = matmul(features, params.value);
  const double scale_factor = 1.0 / std::sqrt(static_cast<double>(keys.cols()));
  const Var attention = softmax_rows(scale(matmul(queries, transpose(keys)), scale_factor));
  return AttentionOutput{matmul(attention, values), attention};
}

AttentionOutput gat_layer(const Mask& neighbors, Var features, const GatHeadVars& head,
                          double slope) {
  const std::size_t n = features.rows();
  if (neighbors.rows() != n || neighbors.cols() != n) {
    throw ShapeError("gat_layer: mask is " + std::to_string(neighbors.rows()) + "x" +
                     std::to_string(neighbors.cols()) + " for " + std::to_string(n) + " nodes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n && !any; ++j) any = neighbors(i, j);
    if (!any) throw ConfigError("gat_layer: node " + std::to_string(i) + " has no neighbors");
  }
  const Var projected = matmul(features, head.weight);
  const std::size_t width = projected.cols();
  if (head.attention.rows() != 1 || head.attention.cols() != 2 * width) {
    throw ShapeError("gat_layer: attention vector " + head.attention.value().shape_string() +
                     " for node width " + std::to_string(width));
  }
  const Var source_score = matmul(projected, transpose(slice_cols(head.attention, 0, width)));
  const Var neighbor_score = matmul(projected, transpose(slice_cols(head.attention, width, width)));
  const Var scores = leaky_relu(outer_sum(source_score, neighbor_score), slope);
  const Var attention = softmax_rows(scores, neighbors);
  return AttentionOutput{leaky_relu(matmul(attention, projected), slope), attention};
}

MultiHeadOutput multi_head(const Mask& neighbors, Var features, std::span<const GatHeadVars> heads,
                           double slope) {
  if (heads.empty()) throw ConfigError("multi_head: at least one head required");
  MultiHeadOutput out;
  std::vector<Var> outputs;
  for (const GatHeadVars& head : heads) {
    AttentionOutput h = gat_layer(neighbors, features, head, slope);
    outputs.push_back(h.output);
    out.attention.push_back(h.attention);
  }
  out.output = outputs.size() == 1 ? outputs.front() : concat_cols(outputs);
  return out;
}

}  // namespace docgraph
