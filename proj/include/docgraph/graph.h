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

#ifndef DOCGRAPH_GRAPH_H_
#define DOCGRAPH_GRAPH_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "docgraph/corpus.h"
#include "docgraph/tape.h"
#include "docgraph/tensor.h"

namespace docgraph {

// Precomputed sentence-similarity matrices keyed by document id. Every
// matrix is square, symmetric within 1e-9, in [0, 1], with a zero diagonal.
class EdgeWeightSet {
 public:
  static constexpr double kSymmetryTolerance = 1e-9;

  // Validates and stores; throws ParseError on a violated invariant or a
  // duplicate id.
  void insert(std::string id, Tensor weights);

  const Tensor* find(std::string_view id) const;
  std::size_t size() const { return weights_.size(); }

  // Leading n x n principal submatrix of the document's weights. Throws
  // ConfigError when the id is absent or the matrix is smaller than n.
  Tensor adjacency_for(std::string_view id, std::size_t n) const;

 private:
  std::map<std::string, Tensor, std::less<>> weights_;
};

// One JSON object per line: {"id": string, "n": int, "weights": [[...], ...]}.
EdgeWeightSet load_edge_weights(const std::filesystem::path& path);

// All ones except a zero diagonal.
Tensor build_adjacency(std::size_t n);

// Divides each row by its sum; all-zero rows stay zero.
Tensor row_normalized(const Tensor& adjacency);

// G = (E, S) for one document. E is not learned.
struct DocumentGraph {
  std::size_t n = 0;
  Tensor adjacency;
  Var features;
};

// E = build_adjacency(n) without weights, otherwise the document's
// similarity matrix truncated to n. S must have doc.n_sentences() rows.
DocumentGraph build_graph(const Document& doc, Var features, const EdgeWeightSet* weights);

}  // namespace docgraph

#endif  // DOCGRAPH_GRAPH_H_
