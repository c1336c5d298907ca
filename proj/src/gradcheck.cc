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

#include "docgraph/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "docgraph/encoder.h"
#include "docgraph/error.h"
#include "docgraph/gnn_layers.h"
#include "docgraph/graph.h"
#include "docgraph/random.h"

namespace docgraph {
namespace {

double evaluate_scalar(const std::vector<Tensor>& inputs, const ScalarFunction& function) {
  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : inputs) vars.push_back(tape.constant(t));
  const Var out = function(tape, vars);
  return out.value()[0];
}

Tensor random_tensor(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(rows, cols);
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// Entries at least 0.1 away from zero, so kinks stay outside the stencil.
Tensor away_from_zero(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t = random_tensor(rows, cols, rng);
  for (double& v : t.values()) v = v < 0.0 ? v - 0.1 : v + 0.1;
  return t;
}

// Scalar probe sum(out * weights) with fixed weights of matching shape.
Var probe(Var out, const Tensor& weights) {
  return sum(mul(out, out.tape().constant(weights)));
}

struct OpCase {
  std::string name;
  std::vector<Tensor> inputs;
  std::function<Var(std::span<const Var>)> op;
};

std::vector<Document> random_documents(std::size_t count, std::size_t vocab, Rng& rng) {
  std::vector<Document> docs;
  for (std::size_t d = 0; d < count; ++d) {
    Document doc;
    doc.id = "grad-" + std::to_string(d);
    doc.label = d % 2;
    const std::size_t n = 2 + rng.below(3);
    for (std::size_t s = 0; s < n; ++s) {
      TokenIds sentence(2 + rng.below(3));
      for (auto& id : sentence) id = static_cast<std::int32_t>(2 + rng.below(vocab - 2));
      doc.sentences.push_back(std::move(sentence));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

EdgeWeightSet random_weights(const std::vector<Document>& docs, Rng& rng) {
  EdgeWeightSet set;
  for (const Document& doc : docs) {
    const std::size_t n = doc.n_sentences();
    Tensor w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = rng.uniform(0.1, 1.0);
    }
    set.insert(doc.id, std::move(w));
  }
  return set;
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale_ = std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / scale_;
}

GradcheckResult check_gradients(std::string name, std::vector<Tensor> inputs,
                                const ScalarFunction& function, double tolerance, double step) {
  GradcheckResult result;
  result.name = std::move(name);
  result.tolerance = tolerance;

  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.variable(t));
    const Var out = function(tape, vars);
    tape.backward(out);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      analytic.push_back(tape.has_grad(vars[i]) ? tape.grad(vars[i])
                                                : Tensor(inputs[i].rows(), inputs[i].cols()));
    }
  }

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double original = inputs[i][k];
      inputs[i][k] = original + step;
      const double up = evaluate_scalar(inputs, function);
      inputs[i][k] = original - step;
      const double down = evaluate_scalar(inputs, function);
      inputs[i][k] = original;
      const double numeric = (up - down) / (2.0 * step);
      result.worst_relative_error =
          std::max(result.worst_relative_error, relative_error(analytic[i][k], numeric));
      ++result.entries_checked;
    }
  }
  result.passed = result.worst_relative_error < tolerance;
  return result;
}

ModelConfig tiny_config(Variant variant, std::uint64_t seed) {
  ModelConfig c;
  c.variant = variant;
  c.class_names = {"trusted", "satire"};
  c.vocab_size = 20;
  c.embed_dim = 6;
  c.hidden_dim = 6;
  c.node_dim = 4;
  c.seed = seed;
  return c;
}

GradcheckResult check_model_gradients(Variant variant, std::uint64_t seed, double tolerance) {
  Model model(tiny_config(variant, seed));
  Rng rng(seed * 7919 + 17);
  const std::vector<Document> docs = random_documents(2, model.config().vocab_size, rng);
  const EdgeWeightSet weights = random_weights(docs, rng);
  const EdgeWeightSet* w = uses_edge_weights(variant) ? &weights : nullptr;

  GradcheckResult result;
  result.name = "model:" + std::string(variant_name(variant));
  result.tolerance = tolerance;
  ParameterStore& store = model.parameters();
  for (const Document& doc : docs) {
    Tape tape;
    const Var l = loss(model.forward(tape, doc, w).logits, doc.label);
    tape.backward(l);
    auto loss_at = [&] {
      Tape probe_tape;
      return loss(model.forward(probe_tape, doc, w).logits, doc.label).value()[0];
    };
    for (std::size_t p = 0; p < store.size(); ++p) {
      Parameter& param = store[p];
      const Tensor* grad = tape.parameter_grad(param);
      for (std::size_t k = 0; k < param.value.size(); ++k) {
        const double analytic = grad == nullptr ? 0.0 : (*grad)[k];
        const double original = param.value[k];
        param.value[k] = original + kFiniteDifferenceStep;
        const double up = loss_at();
        param.value[k] = original - kFiniteDifferenceStep;
        const double down = loss_at();
        param.value[k] = original;
        const double numeric = (up - down) / (2.0 * kFiniteDifferenceStep);
        result.worst_relative_error =
            std::max(result.worst_relative_error, relative_error(analytic, numeric));
        ++result.entries_checked;
      }
    }
  }
  result.passed = result.worst_relative_error < tolerance;
  return result;
}

std::vector<GradcheckResult> run_gradcheck_suite(std::uint64_t seed) {
  Rng rng(seed);
  auto r = [&](std::size_t rows, std::size_t cols) { return random_tensor(rows, cols, rng); };

  Mask neighbors(4, 4, true);
  for (std::size_t i = 0; i < 4; ++i) neighbors.set(i, i, false);
  neighbors.set(0, 3, false);  // a masked neighbor as well as the diagonal
  neighbors.set(3, 0, false);

  std::vector<OpCase> cases;
  cases.push_back({"matmul", {r(4, 5), r(5, 3)}, [](auto v) { return matmul(v[0], v[1]); }});
  cases.push_back({"add", {r(3, 4), r(3, 4)}, [](auto v) { return add(v[0], v[1]); }});
  cases.push_back({"add_row_broadcast", {r(3, 4), r(1, 4)}, [](auto v) { return add(v[0], v[1]); }});
  cases.push_back({"sub", {r(3, 4), r(1, 4)}, [](auto v) { return sub(v[0], v[1]); }});
  cases.push_back({"mul", {r(3, 4), r(3, 4)}, [](auto v) { return mul(v[0], v[1]); }});
  cases.push_back({"scale", {r(3, 4)}, [](auto v) { return scale(v[0], -2.5); }});
  cases.push_back({"sigmoid", {random_tensor(3, 3, rng, -3, 3)}, [](auto v) { return sigmoid(v[0]); }});
  cases.push_back({"tanh", {random_tensor(3, 3, rng, -2, 2)}, [](auto v) { return tanh(v[0]); }});
  cases.push_back({"leaky_relu", {away_from_zero(3, 4, rng)}, [](auto v) { return leaky_relu(v[0], 0.2); }});
  cases.push_back({"exp", {r(3, 3)}, [](auto v) { return exp(v[0]); }});
  cases.push_back({"log", {random_tensor(3, 3, rng, 0.5, 2.0)}, [](auto v) { return log(v[0]); }});
  cases.push_back({"transpose", {r(3, 5)}, [](auto v) { return transpose(v[0]); }});
  cases.push_back({"sum", {r(3, 4)}, [](auto v) { return sum(v[0]); }});
  cases.push_back({"softmax_rows", {random_tensor(3, 4, rng, -2, 2)}, [](auto v) { return softmax_rows(v[0]); }});
  cases.push_back({"softmax_rows_masked", {random_tensor(4, 4, rng, -2, 2)},
                   [neighbors](auto v) { return softmax_rows(v[0], neighbors); }});
  cases.push_back({"max_over_rows", {r(5, 4)}, [](auto v) { return max_over_rows(v[0]); }});
  cases.push_back({"concat_cols", {r(3, 2), r(3, 4)},
                   [](auto v) { return concat_cols(std::vector<Var>{v[0], v[1]}); }});
  cases.push_back({"slice_cols", {r(3, 6)}, [](auto v) { return slice_cols(v[0], 2, 3); }});
  cases.push_back({"stack_rows", {r(1, 4), r(1, 4), r(1, 4)},
                   [](auto v) { return stack_rows(std::vector<Var>{v[0], v[1], v[2]}); }});
  cases.push_back({"take_row", {r(4, 3)}, [](auto v) { return take_row(v[0], 2); }});
  cases.push_back({"gather_rows", {r(6, 3)}, [](auto v) {
                     const std::int32_t ids[] = {2, 5, 2, 0};
                     return gather_rows(v[0], ids);
                   }});
  cases.push_back({"shift_rows", {r(5, 3)}, [](auto v) { return add(shift_rows(v[0], -1), shift_rows(v[0], 2)); }});
  cases.push_back({"outer_sum", {r(4, 1), r(4, 1)}, [](auto v) { return outer_sum(v[0], v[1]); }});
  cases.push_back({"cross_entropy_logits", {random_tensor(1, 4, rng, -2, 2)},
                   [](auto v) { return cross_entropy_logits(v[0], 2); }});
  cases.push_back({"lstm_last_hidden", {r(3, 5), r(5, 16), r(4, 16), r(1, 16)}, [](auto v) {
                     return lstm_last_hidden(v[0], LstmVars{v[1], v[2], v[3], 4});
                   }});
  cases.push_back({"gcn_layer", {r(4, 4), r(4, 5), r(5, 3)},
                   [](auto v) { return gcn_layer(v[0], v[1], v[2], 0.2); }});
  cases.push_back({"self_attention", {r(4, 3), r(3, 3), r(3, 3), r(3, 3)}, [](auto v) {
                     return self_attention(v[0], SelfAttnVars{v[1], v[2], v[3]}).output;
                   }});
  cases.push_back({"gat_layer", {r(4, 5), r(5, 3), r(1, 6)}, [neighbors](auto v) {
                     return gat_layer(neighbors, v[0], GatHeadVars{v[1], v[2]}, 0.2).output;
                   }});

  std::vector<GradcheckResult> results;
  for (OpCase& c : cases) {
    // Probe weights sized from one clean evaluation of the op.
    Tape shape_tape;
    std::vector<Var> vars;
    for (const Tensor& t : c.inputs) vars.push_back(shape_tape.constant(t));
    const Tensor& out = c.op(vars).value();
    const Tensor weights = random_tensor(out.rows(), out.cols(), rng, 0.5, 1.5);
    auto op = c.op;
    results.push_back(check_gradients(
        c.name, c.inputs, [op, weights](Tape&, std::span<const Var> v) { return probe(op(v), weights); }));
  }
  for (Variant v : kAllVariants) results.push_back(check_model_gradients(v, seed));
  return results;
}

}  // namespace docgraph
