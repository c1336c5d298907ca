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

#include "docgraph/encoder.h"

#include <vector>

#include "docgraph/error.h"
#include "docgraph/init.h"

namespace docgraph {

EncoderParams add_encoder_params(ParameterStore& store, const std::string& prefix,
                                 std::size_t vocab_size, std::size_t embed_dim,
                                 std::size_t hidden_dim, Rng& rng) {
  EncoderParams p;
  p.embedding = &store.add(prefix + ".embedding", xavier_uniform(vocab_size, embed_dim, rng));
  p.lstm.w_input = &store.add(prefix + ".lstm.w_input",
                              xavier_uniform(embed_dim, 4 * hidden_dim, embed_dim, hidden_dim, rng));
  p.lstm.w_hidden = &store.add(prefix + ".lstm.w_hidden",
                               xavier_uniform(hidden_dim, 4 * hidden_dim, hidden_dim, hidden_dim, rng));
  Tensor bias(1, 4 * hidden_dim);
  for (std::size_t j = hidden_dim; j < 2 * hidden_dim; ++j) bias(0, j) = 1.0;
  p.lstm.bias = &store.add(prefix + ".lstm.bias", std::move(bias));
  return p;
}

LstmVars bind(Tape& tape, const LstmParams& params) {
  return LstmVars{tape.parameter(*params.w_input), tape.parameter(*params.w_hidden),
                  tape.parameter(*params.bias), params.hidden_dim()};
}

EncoderVars bind(Tape& tape, const EncoderParams& params) {
  return EncoderVars{tape.parameter(*params.embedding), bind(tape, params.lstm)};
}

Var embed(std::span<const std::int32_t> tokens, const EncoderVars& params) {
  return gather_rows(params.embedding, tokens);
}

Var lstm_last_hidden(Var inputs, const LstmVars& params) {
  const std::size_t steps = inputs.rows();
  const std::size_t h = params.hidden_dim;
  if (steps == 0) throw ShapeError("lstm_last_hidden: empty sequence");
  if (params.w_input.rows() != inputs.cols() || params.w_input.cols() != 4 * h) {
    throw ShapeError("lstm_last_hidden: input width " + std::to_string(inputs.cols()) +
                     " does not match w_input " + params.w_input.value().shape_string());
  }
  Tape& tape = inputs.tape();
  // Input contributions for every step at once.
  const Var projected = add(matmul(inputs, params.w_input), params.bias);
  Var hidden = tape.constant(Tensor(1, h));
  Var cell = tape.constant(Tensor(1, h));
  for (std::size_t t = 0; t < steps; ++t) {
    const Var gates = add(take_row(projected, t), matmul(hidden, params.w_hidden));
    const Var input_gate = sigmoid(slice_cols(gates, 0, h));
    const Var forget_gate = sigmoid(slice_cols(gates, h, h));
    const Var output_gate = sigmoid(slice_cols(gates, 2 * h, h));
    const Var candidate = tanh(slice_cols(gates, 3 * h, h));
    cell = add(mul(forget_gate, cell), mul(input_gate, candidate));
    hidden = mul(output_gate, tanh(cell));
  }
  return hidden;
}

Var encode_document(const Document& doc, const EncoderVars& params) {
  if (doc.sentences.empty()) throw ShapeError("encode_document: document " + doc.id + " has no sentences");
  std::vector<Var> rows;
  rows.reserve(doc.sentences.size());
  for (const TokenIds& sentence : doc.sentences) {
    rows.push_back(lstm_last_hidden(embed(sentence, params), params.lstm));
  }
  return stack_rows(rows);
}

}  // namespace docgraph
