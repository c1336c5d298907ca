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

#ifndef DOCGRAPH_INIT_H_
#define DOCGRAPH_INIT_H_

#include <cmath>
#include <cstddef>

#include "docgraph/random.h"
#include "docgraph/tensor.h"

namespace docgraph {

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
inline Tensor xavier_uniform(std::size_t rows, std::size_t cols, std::size_t fan_in,
                             std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor out(rows, cols);
  for (double& v : out.values()) v = rng.uniform(-bound, bound);
  return out;
}

inline Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  return xavier_uniform(rows, cols, rows, cols, rng);
}

}  // namespace docgraph

#endif  // DOCGRAPH_INIT_H_
