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

#ifndef DOCGRAPH_GRADCHECK_H_
#define DOCGRAPH_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "docgraph/model.h"
#include "docgraph/tape.h"
#include "docgraph/tensor.h"

namespace docgraph {

inline constexpr double kOpTolerance = 1e-6;
inline constexpr double kModelTolerance = 1e-4;
inline constexpr double kFiniteDifferenceStep = 1e-5;

// |analytic - numeric| / max(1, |analytic|, |numeric|).
double relative_error(double analytic, double numeric);

struct GradcheckResult {
  std::string name;
  double worst_relative_error = 0.0;
  double tolerance = 0.0;
  std::size_t entries_checked = 0;
  bool passed = false;
};

// Builds a scalar from variables holding `inputs`, on a fresh tape per call.
using ScalarFunction = std::function<Var(Tape&, std::span<const Var>)>;

// Compares reverse-mode gradients with central finite differences for every
// entry of every input.
GradcheckResult check_gradients(std::string name, std::vector<Tensor> inputs,
                                const ScalarFunction& function, double tolerance = kOpTolerance,
                                double step = kFiniteDifferenceStep);

// Tiny configuration used for end-to-end checks: V = 20, embedding and
// hidden width 6, node width 4.
ModelConfig tiny_config(Variant variant, std::uint64_t seed);

// Loss gradient w.r.t. every parameter entry of a tiny model on random
// documents of 2 to 4 sentences.
GradcheckResult check_model_gradients(Variant variant, std::uint64_t seed,
                                      double tolerance = kModelTolerance);

// Every differentiable op and layer once, then every variant once.
std::vector<GradcheckResult> run_gradcheck_suite(std::uint64_t seed = 1);

}  // namespace docgraph

#endif  // DOCGRAPH_GRADCHECK_H_
