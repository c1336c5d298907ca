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

#ifndef DOCGRAPH_ADAM_H_
#define DOCGRAPH_ADAM_H_

#include <cstdint>
#include <vector>

#include "docgraph/tensor.h"

namespace docgraph {

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers for every parameter of one store, in store order.
struct AdamState {
  AdamState() = default;
  AdamState(const ParameterStore& store, AdamOptions options);

  AdamOptions options;
  std::int64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

// One bias-corrected Adam update from the gradients held in `store`.
// Every gradient is checked first; a non-finite entry aborts the whole step
// with a NumericError naming the parameter, leaving values and state intact.
void adam_step(ParameterStore& store, AdamState& state);

// Rescales all gradients so their global L2 norm is at most `max_norm`.
// Returns the norm before clipping.
double clip_grad_norm(ParameterStore& store, double max_norm);

}  // namespace docgraph

#endif  // DOCGRAPH_ADAM_H_
