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

#ifndef DOCGRAPH_TRAINING_H_
#define DOCGRAPH_TRAINING_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

#include "docgraph/checkpoint.h"
#include "docgraph/corpus.h"
#include "docgraph/evaluation.h"
#include "docgraph/graph.h"
#include "docgraph/model.h"

namespace docgraph {

struct EpochRecord {
  std::size_t epoch = 0;      // 1-based
  double train_loss = 0.0;    // mean per-document loss seen during the epoch
  double dev_macro_f1 = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainOptions {
  // Called after each epoch with the current (not best) model. Returning
  // false ends training after that epoch.
  std::function<bool(const EpochRecord&, const Model&)> on_epoch;
  std::size_t eval_threads = evaluation_threads();
};

struct TrainRun {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_dev_macro_f1 = 0.0;
  Checkpoint checkpoint;  // parameters of best_epoch
};

// Adam over per-document steps (batch size 1), documents reshuffled each
// epoch from the config seed, dev macro-F1 after every epoch, best epoch kept
// (earliest on ties). Throws ConfigError on empty sets, a class with no
// training documents or max_epochs == 0, and NumericError naming the
// document when a loss or gradient turns non-finite.
TrainRun train(std::span<const Document> train_docs, std::span<const Document> dev_docs,
               const ModelConfig& config, const Vocabulary& vocab, const EdgeWeightSet* weights,
               const TrainOptions& options = {});

// Mean cross-entropy over `docs` without updating anything.
double mean_loss(const Model& model, std::span<const Document> docs, const EdgeWeightSet* weights);

nlohmann::json run_log_to_json(const TrainRun& run);

}  // namespace docgraph

#endif  // DOCGRAPH_TRAINING_H_
