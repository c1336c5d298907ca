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

#ifndef DOCGRAPH_GNN_LAYERS_H_
#define DOCGRAPH_GNN_LAYERS_H_

#include <span>
#include <vector>

#include "docgraph/tape.h"
#include "docgraph/tensor.h"

namespace docgraph {

struct GcnParams {
  Parameter* weight = nullptr;  // [d_in, node_dim]
};

struct SelfAttnParams {
  Parameter* query = nullptr;  // [node_dim, node_dim]
  Parameter* key = nullptr;
  Parameter* value = nullptr;
};

struct GatHeadParams {
  Parameter* weight = nullptr;     // [d_in, node_dim]
  Parameter* attention = nullptr;  // [1, 2 * node_dim]: source half, then neighbor half
};

struct SelfAttnVars {
  Var query;
  Var key;
  Var value;
};

struct GatHeadVars {
  Var weight;
  Var attention;
};

SelfAttnVars bind(Tape& tape, const SelfAttnParams& params);
GatHeadVars bind(Tape& tape, const GatHeadParams& params);

// E * Z * W, no normalization and no self-loops.
Var gcn_preactivation(Var adjacency, Var features, Var weight);
// leaky_relu(E * Z * W, slope).
Var gcn_layer(Var adjacency, Var features, Var weight, double slope);

struct AttentionOutput {
  Var output;
  Var attention;  // [n, n], row-stochastic
};

// A = softmax_rows((Z Q)(Z K)^T / sqrt(d)); output = A (Z V).
AttentionOutput self_attention(Var features, const SelfAttnVars& params);

// One graph-attention head. For each i and each neighbor j (neighbors(i, j)
// set): s_ij = leaky_relu(a^T [W h_i || W h_j], slope), alpha_i = softmax of
// s_i over the neighbors, out_i = leaky_relu(sum_j alpha_ij W h_j, slope).
// Throws ConfigError when a node has no neighbors.
AttentionOutput gat_layer(const Mask& neighbors, Var features, const GatHeadVars& head,
                          double slope);

struct MultiHeadOutput {
  Var output;                   // per-head outputs concatenated in head order
  std::vector<Var> attention;  // one matrix per head
};

MultiHeadOutput multi_head(const Mask& neighbors, Var features, std::span<const GatHeadVars> heads,
                           double slope);

}  // namespace docgraph

#endif  // DOCGRAPH_GNN_LAYERS_H_
