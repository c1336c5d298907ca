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

#include "docgraph/adam.h"

#include <cmath>

#include "docgraph/error.h"

namespace docgraph {

AdamState::AdamState(const ParameterStore& store, AdamOptions options) : options(options) {
  first_moment.reserve(store.size());
  second_moment.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Tensor& v = store[i].value;
    first_moment.emplace_back(v.rows(), v.cols());
    second_moment.emplace_back(v.rows(), v.cols());
  }
}

void adam_step(ParameterStore& store, AdamState& state) {
  if (state.first_moment.size() != store.size() || state.second_moment.size() != store.size()) {
    throw ShapeError("adam_step: optimizer state does not match parameter store");
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Parameter& p = store[i];
    if (!p.grad.same_shape(p.value) || !state.first_moment[i].same_shape(p.value)) {
      throw ShapeError("adam_step: shape mismatch for " + p.name);
    }
    if (!p.grad.all_finite()) throw NumericError("adam_step: non-finite gradient in " + p.name);
  }

  const AdamOptions& o = state.options;
  state.step += 1;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store[i];
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g;
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g * g;
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p.value[k] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

double clip_grad_norm(ParameterStore& store, double max_norm) {
  double squared = 0.0;
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (double g : store[i].grad.values()) squared += g * g;
  }
  const double norm = std::sqrt(squared);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (std::size_t i = 0; i < store.size(); ++i) {
      for (double& g : store[i].grad.values()) g *= factor;
    }
  }
  return norm;
}

}  // namespace docgraph
