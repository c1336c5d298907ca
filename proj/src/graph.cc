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

#include "docgraph/graph.h"

#include <cmath>
#include <fstream>
#include <utility>

#include "json.hpp"

#include "docgraph/error.h"

namespace docgraph {

void EdgeWeightSet::insert(std::string id, Tensor weights) {
  const std::string where = "edge weights for " + id + ": ";
  if (weights.rows() != weights.cols()) throw ParseError(where + "matrix is not square");
  const std::size_t n = weights.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) throw ParseError(where + "nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ParseError(where + "value " + std::to_string(w) + " outside [0, 1] at (" +
                         std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      if (std::abs(w - weights(j, i)) > kSymmetryTolerance) {
        throw ParseError(where + "asymmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  if (!weights_.emplace(std::move(id), std::move(weights)).second) {
    throw ParseError(where + "duplicate id");
  }
}

const Tensor* EdgeWeightSet::find(std::string_view id) const {
  auto it = weights_.find(id);
  return it == weights_.end() ? nullptr : &it->second;
}

Tensor EdgeWeightSet::adjacency_for(std::string_view id, std::size_t n) const {
  const Tensor* full = find(id);
  if (full == nullptr) {
    throw ConfigError("no edge weights for document " + std::string(id));
  }
  if (full->rows() < n) {
    throw ConfigError("edge weights for document " + std::string(id) + " cover " +
                      std::to_string(full->rows()) + " sentences, document has " + std::to_string(n));
  }
  Tensor out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = (*full)(i, j);
  }
  return out;
}

EdgeWeightSet load_edge_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read edge-weight file " + path.string());
  EdgeWeightSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const nlohmann::json record = nlohmann::json::parse(line);
      const std::string id = record.at("id").get<std::string>();
      const auto n = record.at("n").get<std::size_t>();
      const auto& rows = record.at("weights");
      if (!rows.is_array() || rows.size() != n) {
        throw ParseError("\"weights\" must hold n = " + std::to_string(n) + " rows");
      }
      Tensor weights(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) {
          throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(n) + " values");
        }
        for (std::size_t j = 0; j < n; ++j) weights(i, j) = rows[i][j].get<double>();
      }
      set.insert(id, std::move(weights));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  return set;
}

Tensor build_adjacency(std::size_t n) {
  Tensor e(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) e(i, i) = 0.0;
  return e;
}

Tensor row_normalized(const Tensor& adjacency) {
  Tensor out = adjacency;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < out.cols(); ++j) total += out(i, j);
    if (total == 0.0) continue;
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) /= total;
  }
  return out;
}

DocumentGraph build_graph(const Document& doc, Var features, const EdgeWeightSet* weights) {
  const std::size_t n = doc.n_sentences();
  if (features.rows() != n) {
    throw ShapeError("build_graph: " + std::to_string(features.rows()) + " feature rows for " +
                     std::to_string(n) + " sentences in " + doc.id);
  }
  DocumentGraph g;
  g.n = n;
  g.adjacency = weights == nullptr ? build_adjacency(n) : weights->adjacency_for(doc.id, n);
  g.features = features;
  return g;
}

}  // namespace docgraph
