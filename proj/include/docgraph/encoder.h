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

#ifndef DOCGRAPH_ENCODER_H_
#define DOCGRAPH_ENCODER_H_

#include <cstddef>
#include <span>
#include <string>

#include "docgraph/corpus.h"
#include "docgraph/random.h"
#include "docgraph/tape.h"
#include "docgraph/tensor.h"

namespace docgraph {

// Single-layer unidirectional LSTM. Gate blocks are laid out as
// [input | forget | output | candidate] along the columns of every matrix.
struct LstmParams {
  Parameter* w_input = nullptr;   // [input_dim, 4 * hidden]
  Parameter* w_hidden = nullptr;  // [hidden, 4 * hidden]
  Parameter* bias = nullptr;      // [1, 4 * hidden]

  std::size_t hidden_dim() const { return w_hidden->value.rows(); }
};

// Word embeddings plus the LSTM whose last hidden state encodes a token
// sequence.
struct EncoderParams {
  Parameter* embedding = nullptr;  // [vocab, embed_dim]
  LstmParams lstm;
};

// Registers "<prefix>.embedding" and "<prefix>.lstm.{w_input,w_hidden,bias}".
// Matrices are Xavier-uniform per gate block, biases 0 except the forget gate
// (1.0).
EncoderParams add_encoder_params(ParameterStore& store, const std::string& prefix,
                                 std::size_t vocab_size, std::size_t embed_dim,
                                 std::size_t hidden_dim, Rng& rng);

// Parameters bound to one tape.
struct LstmVars {
  Var w_input;
  Var w_hidden;
  Var bias;
  std::size_t hidden_dim = 0;
};

struct EncoderVars {
  Var embedding;
  LstmVars lstm;
};

LstmVars bind(Tape& tape, const LstmParams& params);
EncoderVars bind(Tape& tape, const EncoderParams& params);

// [T, embed_dim]; row t is the embedding of tokens[t].
Var embed(std::span<const std::int32_t> tokens, const EncoderVars& params);

// h_T of the recurrence from h_0 = c_0 = 0, as 1 x hidden. T >= 1.
Var lstm_last_hidden(Var inputs, const LstmVars& params);

// [n_sentences, hidden]; row i = lstm_last_hidden(embed(sentence i)).
Var encode_document(const Document& doc, const EncoderVars& params);

}  // namespace docgraph

#endif  // DOCGRAPH_ENCODER_H_
