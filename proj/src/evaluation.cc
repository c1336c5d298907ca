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

#include "docgraph/evaluation.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>

#include "docgraph/error.h"

namespace docgraph {

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes), counts_(classes * classes, 0) {}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  ConfusionMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ShapeError("confusion matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i][j] < 0) throw ConfigError("confusion counts must be non-negative");
      m.add(i, j, rows[i][j]);
    }
  }
  return m;
}

void ConfusionMatrix::add(std::size_t gold, std::size_t predicted, std::int64_t count) {
  if (gold >= classes_ || predicted >= classes_) {
    throw ConfigError("class index outside a " + std::to_string(classes_) + "-class confusion matrix");
  }
  counts_[gold * classes_ + predicted] += count;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) throw ShapeError("cannot merge confusion matrices of different sizes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (std::int64_t c : counts_) t += c;
  return t;
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

long double ratio_ld(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0L : static_cast<long double>(num) / static_cast<long double>(den);
}

}  // namespace

Metrics compute_metrics(const ConfusionMatrix& confusion) {
  const std::size_t c = confusion.classes();
  if (confusion.total() == 0) throw ConfigError("no documents: confusion matrix is empty");
  Metrics m;
  m.confusion = confusion;
  m.count = confusion.total();
  std::int64_t correct = 0;
  // Sums in long double so small fixtures round once, to the nearest double.
  long double precision_sum = 0.0L;
  long double recall_sum = 0.0L;
  long double f1_sum = 0.0L;
  for (std::size_t k = 0; k < c; ++k) {
    std::int64_t predicted = 0;
    std::int64_t gold = 0;
    for (std::size_t j = 0; j < c; ++j) {
      predicted += confusion(j, k);
      gold += confusion(k, j);
    }
    const std::int64_t tp = confusion(k, k);
    correct += tp;
    ClassMetrics cm;
    cm.precision = ratio(tp, predicted);
    cm.recall = ratio(tp, gold);
    // 2PR / (P + R) over counts: 2tp / (predicted + gold).
    cm.f1 = ratio(2 * tp, predicted + gold);
    cm.support = gold;
    precision_sum += ratio_ld(tp, predicted);
    recall_sum += ratio_ld(tp, gold);
    f1_sum += ratio_ld(2 * tp, predicted + gold);
    m.per_class.push_back(cm);
  }
  const long double classes = static_cast<long double>(c);
  m.macro_precision = static_cast<double>(precision_sum / classes);
  m.macro_recall = static_cast<double>(recall_sum / classes);
  m.macro_f1 = static_cast<double>(f1_sum / classes);
  m.accuracy = ratio(correct, m.count);
  return m;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t evaluation_threads() {
  if (const char* env = std::getenv("DOCGRAPH_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::size_t> predict_classes(const Model& model, std::span<const Document> docs,
                                         const EdgeWeightSet* weights, std::size_t threads) {
  std::vector<std::size_t> out(docs.size(), 0);
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(docs.size(), 1));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t worker) {
    try {
      for (std::size_t i = worker; i < docs.size(); i += workers) {
        out[i] = argmax(model.logits(docs[i], weights).values());
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Metrics evaluate(const Model& model, std::span<const Document> docs, const EdgeWeightSet* weights,
                 std::size_t threads) {
  if (docs.empty()) throw ConfigError("no documents to evaluate");
  const std::vector<std::size_t> predicted = predict_classes(model, docs, weights, threads);
  ConfusionMatrix confusion(model.config().num_classes());
  for (std::size_t i = 0; i < docs.size(); ++i) confusion.add(docs[i].label, predicted[i]);
  return compute_metrics(confusion);
}

nlohmann::json metrics_to_json(const Metrics& metrics, const std::vector<std::string>& class_names) {
  nlohmann::json out;
  const std::size_t c = metrics.confusion.classes();
  if (class_names.size() != c) throw ConfigError("class names do not match the confusion matrix");
  nlohmann::json confusion = nlohmann::json::array();
  for (std::size_t i = 0; i < c; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < c; ++j) row.push_back(metrics.confusion(i, j));
    confusion.push_back(std::move(row));
  }
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t k = 0; k < c; ++k) {
    const ClassMetrics& cm = metrics.per_class[k];
    per_class[class_names[k]] = {
        {"f1", cm.f1}, {"precision", cm.precision}, {"recall", cm.recall}, {"support", cm.support}};
  }
  out["accuracy"] = metrics.accuracy;
  out["classes"] = class_names;
  out["confusion"] = std::move(confusion);
  out["count"] = metrics.count;
  out["macro"] = {{"f1", metrics.macro_f1},
                  {"precision", metrics.macro_precision},
                  {"recall", metrics.macro_recall}};
  out["per_class"] = std::move(per_class);
  out["zero_division"] = "undefined precision, recall or F1 is reported as 0";
  return out;
}

}  // namespace docgraph
