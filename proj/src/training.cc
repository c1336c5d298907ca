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

#include "docgraph/training.h"

#include <numeric>
#include <utility>

#include "docgraph/adam.h"
#include "docgraph/error.h"
#include "docgraph/random.h"
#include "docgraph/tape.h"

namespace docgraph {
namespace {

// Keeps the shuffle stream apart from parameter initialization.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ull;

void check_inputs(std::span<const Document> train_docs, std::span<const Document> dev_docs,
                  const ModelConfig& config, const Vocabulary& vocab) {
  if (config.max_epochs == 0) throw ConfigError("max_epochs must be at least 1");
  if (train_docs.empty()) throw ConfigError("training set is empty");
  if (dev_docs.empty()) throw ConfigError("development set is empty");
  if (config.vocab_size != vocab.size()) {
    throw ConfigError("config vocab_size " + std::to_string(config.vocab_size) +
                      " does not match vocabulary of " + std::to_string(vocab.size()));
  }
  std::vector<std::size_t> per_class(config.num_classes(), 0);
  for (const Document& d : train_docs) {
    if (d.label >= per_class.size()) throw ConfigError("document " + d.id + " has an unknown class");
    ++per_class[d.label];
  }
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (per_class[c] == 0) {
      throw ConfigError("class " + config.class_names[c] + " has no training documents");
    }
  }
}

}  // namespace

TrainRun train(std::span<const Document> train_docs, std::span<const Document> dev_docs,
               const ModelConfig& config, const Vocabulary& vocab, const EdgeWeightSet* weights,
               const TrainOptions& options) {
  check_inputs(train_docs, dev_docs, config, vocab);

  Model model(config);
  ParameterStore& store = model.parameters();
  AdamState adam(store, AdamOptions{.learning_rate = config.learning_rate});
  Rng shuffle_rng(config.seed ^ kShuffleStream);

  std::vector<std::size_t> order(train_docs.size());
  std::iota(order.begin(), order.end(), 0);

  TrainRun run{{}, 0, -1.0, Checkpoint{Model(config), vocab, {}}};
  std::vector<Tensor> best_values;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_total = 0.0;
    for (std::size_t index : order) {
      const Document& doc = train_docs[index];
      store.zero_grad();
      Tape tape;
      try {
        const Var l = loss(model.forward(tape, doc, weights).logits, doc.label);
        loss_total += l.value()[0];
        tape.backward(l);
        tape.accumulate_into(store);
        if (config.clip_norm > 0.0) clip_grad_norm(store, config.clip_norm);
        adam_step(store, adam);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", document " + doc.id + ": " + e.what());
      }
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_total / static_cast<double>(train_docs.size());
    record.dev_macro_f1 = evaluate(model, dev_docs, weights, options.eval_threads).macro_f1;
    run.epochs.push_back(record);
    if (record.dev_macro_f1 > run.best_dev_macro_f1) {
      run.best_dev_macro_f1 = record.dev_macro_f1;
      run.best_epoch = epoch;
      best_values = store.snapshot();
    }
    if (options.on_epoch && !options.on_epoch(record, model)) break;
  }

  run.checkpoint.model.parameters().restore(best_values);
  run.checkpoint.metadata = TrainingMetadata{config.seed, run.best_epoch, run.best_dev_macro_f1,
                                             run.epochs.size()};
  return run;
}

double mean_loss(const Model& model, std::span<const Document> docs, const EdgeWeightSet* weights) {
  if (docs.empty()) throw ConfigError("no documents");
  double total = 0.0;
  for (const Document& doc : docs) {
    Tape tape;
    total += loss(model.forward(tape, doc, weights).logits, doc.label).value()[0];
  }
  return total / static_cast<double>(docs.size());
}

nlohmann::json run_log_to_json(const TrainRun& run) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochRecord& e : run.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"dev_macro_f1", e.dev_macro_f1}});
  }
  return {
      {"config", config_to_json(run.checkpoint.model.config())},
      {"epochs", std::move(epochs)},
      {"best_epoch", run.best_epoch},
      {"best_dev_macro_f1", run.best_dev_macro_f1},
      {"parameter_count", run.checkpoint.model.parameters().scalar_count()},
  };
}

}  // namespace docgraph
