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

#ifndef DOCGRAPH_EVALUATION_H_
#define DOCGRAPH_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "docgraph/corpus.h"
#include "docgraph/graph.h"
#include "docgraph/model.h"

namespace docgraph {

// Rows are gold classes, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t classes() const { return classes_; }
  std::int64_t operator()(std::size_t gold, std::size_t predicted) const {
    return counts_[gold * classes_ + predicted];
  }
  void add(std::size_t gold, std::size_t predicted, std::int64_t count = 1);
  void merge(const ConfusionMatrix& other);
  std::int64_t total() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_ = 0;
  std::vector<std::int64_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;  // gold count
};

struct Metrics {
  ConfusionMatrix confusion{0};
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;  // mean of per-class F1
  double accuracy = 0.0;
  std::int64_t count = 0;
};

// Precision, recall and F1 of a class are 0 whenever their denominator is 0.
// Throws ConfigError on an empty matrix.
Metrics compute_metrics(const ConfusionMatrix& confusion);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

// Worker count for evaluation: DOCGRAPH_THREADS when set and positive,
// otherwise the hardware concurrency.
std::size_t evaluation_threads();

// Predicted class per document, in input order.
std::vector<std::size_t> predict_classes(const Model& model, std::span<const Document> docs,
                                         const EdgeWeightSet* weights,
                                         std::size_t threads = evaluation_threads());

Metrics evaluate(const Model& model, std::span<const Document> docs, const EdgeWeightSet* weights,
                 std::size_t threads = evaluation_threads());

// Keys are emitted in sorted order.
nlohmann::json metrics_to_json(const Metrics& metrics, const std::vector<std::string>& class_names);

}  // namespace docgraph

#endif  // DOCGRAPH_EVALUATION_H_
