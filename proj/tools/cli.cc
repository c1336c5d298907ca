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

#include "cli.h"

#include <fstream>
#include <optional>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "docgraph/attention_svg.h"
#include "docgraph/checkpoint.h"
#include "docgraph/corpus_stats.h"
#include "docgraph/error.h"
#include "docgraph/evaluation.h"
#include "docgraph/gradcheck.h"
#include "docgraph/protocol.h"
#include "docgraph/training.h"

namespace docgraph::cli {
namespace {

struct DataFlags {
  std::string format;  // empty: infer from extension
  std::string edge_weights;
};

struct TrainFlags {
  std::string protocol = "four_way";
  std::string train;
  std::string dev;
  std::vector<std::string> tests;
  std::string model = "gcn";
  std::uint64_t seed = 0;
  double lr = 0.001;
  std::size_t epochs = 10;
  std::size_t max_sentences = 64;
  std::size_t max_tokens = 64;
  std::size_t min_frequency = 2;
  std::size_t embed_dim = 100;
  std::size_t hidden_dim = 100;
  std::size_t node_dim = 32;
  std::size_t gcn_layers = 1;
  bool normalize_adjacency = false;
  double clip_norm = 0.0;
  std::string out;
  std::string log;
};

struct CheckpointFlags {
  std::string ckpt;
  std::string data;
  std::string doc_id;
  std::string out;
};

CorpusFormat format_for(const DataFlags& flags, const std::string& path) {
  return flags.format.empty() ? infer_corpus_format(path) : parse_corpus_format(flags.format);
}

std::optional<EdgeWeightSet> maybe_weights(const DataFlags& flags) {
  if (flags.edge_weights.empty()) return std::nullopt;
  return load_edge_weights(flags.edge_weights);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << content;
  if (!f) throw Error("failed writing " + path);
}

const EdgeWeightSet* weights_for(const Model& model, const std::optional<EdgeWeightSet>& weights) {
  if (uses_edge_weights(model.config().variant)) {
    if (!weights) {
      throw ConfigError("model " + std::string(variant_name(model.config().variant)) +
                        " requires --edge-weights");
    }
    return &*weights;
  }
  return nullptr;
}

// Loads `data` with the checkpoint's class set as a hard filter and encodes
// it with the checkpoint vocabulary. Unknown tokens become <unk>.
std::vector<Document> load_for_checkpoint(const Checkpoint& ckpt, const DataFlags& flags,
                                          const std::string& data, std::ostream& err,
                                          std::vector<RawDocument>* raw_out = nullptr) {
  const ModelConfig& config = ckpt.model.config();
  const ClassSet classes = config.classes();
  std::vector<RawDocument> raw = load_corpus(data, format_for(flags, data), &classes);
  if (raw.empty()) throw ConfigError("no documents in " + data);
  EncodedCorpus encoded = encode_corpus(raw, ckpt.vocabulary, classes, config.encode_options());
  if (encoded.dropped > 0) {
    err << "warning: dropped " << encoded.dropped << " documents with no tokens\n";
  }
  if (encoded.documents.empty()) throw ConfigError("no documents in " + data);
  if (raw_out != nullptr) *raw_out = std::move(raw);
  return std::move(encoded.documents);
}

int cmd_train(const TrainFlags& f, const DataFlags& d, std::ostream& out, std::ostream& err) {
  ModelConfig config;
  config.variant = parse_variant(f.model);
  if (uses_edge_weights(config.variant) && d.edge_weights.empty()) {
    throw ConfigError("model " + f.model + " requires --edge-weights (semantic-similarity scores)");
  }
  const ProtocolPreset preset = protocol_preset(f.protocol);
  config.class_names = preset.classes.names();
  config.embed_dim = f.embed_dim;
  config.hidden_dim = f.hidden_dim;
  config.node_dim = f.node_dim;
  config.gcn_layers = f.gcn_layers;
  config.normalize_adjacency = f.normalize_adjacency;
  config.seed = f.seed;
  config.learning_rate = f.lr;
  config.max_epochs = f.epochs;
  config.max_sentences = f.max_sentences;
  config.max_tokens = f.max_tokens;
  config.min_frequency = f.min_frequency;
  config.clip_norm = f.clip_norm;
  if (config.max_epochs == 0) throw ConfigError("--epochs must be at least 1");

  ProtocolInputs inputs;
  inputs.train = load_corpus(f.train, format_for(d, f.train));
  if (!f.dev.empty()) inputs.dev = load_corpus(f.dev, format_for(d, f.dev));
  for (const std::string& t : f.tests) inputs.tests.emplace_back(t, load_corpus(t, format_for(d, t)));
  PreparedData data =
      prepare_protocol(preset, std::move(inputs), f.min_frequency, config.encode_options(), f.seed);
  if (data.dropped > 0) err << "warning: dropped " << data.dropped << " documents with no tokens\n";
  config.vocab_size = data.vocabulary.size();

  const std::optional<EdgeWeightSet> weights = maybe_weights(d);
  const EdgeWeightSet* w = uses_edge_weights(config.variant) ? &*weights : nullptr;
  err << "training " << f.model << " on " << data.train.size() << " documents, dev "
      << data.dev.size() << ", vocabulary " << config.vocab_size << "\n";

  TrainOptions options;
  options.on_epoch = [&err](const EpochRecord& e, const Model&) {
    err << "epoch " << e.epoch << ": train loss " << e.train_loss << ", dev macro-F1 "
        << e.dev_macro_f1 << "\n";
    return true;
  };
  TrainRun run = train(data.train, data.dev, config, data.vocabulary, w, options);
  save_checkpoint(run.checkpoint, f.out);

  nlohmann::json log = run_log_to_json(run);
  log["protocol"] = preset.name;
  log["train_documents"] = data.train.size();
  log["dev_documents"] = data.dev.size();
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& [name, docs] : data.tests) {
    if (docs.empty()) continue;
    const Metrics m = evaluate(run.checkpoint.model, docs, w);
    tests.push_back({{"data", name}, {"metrics", metrics_to_json(m, config.class_names)}});
  }
  log["tests"] = std::move(tests);
  write_file(f.log.empty() ? f.out + ".log.json" : f.log, log.dump(2) + "\n");

  err << "best dev macro-F1 " << run.best_dev_macro_f1 << " at epoch " << run.best_epoch << "\n";
  out << nlohmann::json{{"best_dev_macro_f1", run.best_dev_macro_f1},
                        {"best_epoch", run.best_epoch},
                        {"checkpoint", f.out}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_eval(const CheckpointFlags& f, const DataFlags& d, std::ostream& out, std::ostream& err) {
  const Checkpoint ckpt = load_checkpoint(f.ckpt);
  const std::vector<Document> docs = load_for_checkpoint(ckpt, d, f.data, err);
  const std::optional<EdgeWeightSet> weights = maybe_weights(d);
  const Metrics m = evaluate(ckpt.model, docs, weights_for(ckpt.model, weights));
  out << metrics_to_json(m, ckpt.model.config().class_names).dump(2) << "\n";
  return kExitOk;
}

int cmd_predict(const CheckpointFlags& f, const DataFlags& d, std::ostream& out, std::ostream& err) {
  const Checkpoint ckpt = load_checkpoint(f.ckpt);
  const ModelConfig& config = ckpt.model.config();
  std::vector<RawDocument> raw;
  const std::vector<Document> docs = load_for_checkpoint(ckpt, d, f.data, err, &raw);
  const std::optional<EdgeWeightSet> weights = maybe_weights(d);
  const EdgeWeightSet* w = weights_for(ckpt.model, weights);
  for (const Document& doc : docs) {
    const Tensor logits = ckpt.model.logits(doc, w);
    const std::vector<double> p = softmax(logits.values());
    nlohmann::json probabilities = nlohmann::json::object();
    for (std::size_t c = 0; c < p.size(); ++c) probabilities[config.class_names[c]] = p[c];
    out << nlohmann::json{{"id", doc.id},
                          {"predicted", config.class_names[argmax(logits.values())]},
                          {"probabilities", std::move(probabilities)}}
               .dump()
        << "\n";
  }
  return kExitOk;
}

int cmd_export_attention(const CheckpointFlags& f, const DataFlags& d, std::ostream& out,
                         std::ostream& err) {
  const Checkpoint ckpt = load_checkpoint(f.ckpt);
  if (!produces_attention(ckpt.model.config().variant)) {
    throw ConfigError("variant " + std::string(variant_name(ckpt.model.config().variant)) +
                      " does not produce attention; use gat, gat2, gcn_attn or gcn_attn_ss");
  }
  const ClassSet classes = ckpt.model.config().classes();
  const std::vector<RawDocument> raw = load_corpus(f.data, format_for(d, f.data), &classes);
  const RawDocument* target = nullptr;
  for (const RawDocument& doc : raw) {
    if (doc.id == f.doc_id) target = &doc;
  }
  if (target == nullptr) throw ConfigError("no document with id " + f.doc_id + " in " + f.data);
  const std::optional<EdgeWeightSet> weights = maybe_weights(d);
  const AttentionMap map =
      attention_for_document(ckpt.model, ckpt.vocabulary, *target, weights_for(ckpt.model, weights));
  write_file(f.out, render_attention_svg(map));
  err << "wrote " << map.heads.size() << " attention grid(s) of " << map.heads.front().rows()
      << " sentences to " << f.out << "\n";
  out << nlohmann::json{{"doc_id", map.doc_id}, {"heads", map.heads.size()},
                        {"n", map.heads.front().rows()}, {"out", f.out}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const std::vector<GradcheckResult> results = run_gradcheck_suite(seed);
  bool all_passed = true;
  nlohmann::json report = nlohmann::json::array();
  for (const GradcheckResult& r : results) {
    all_passed = all_passed && r.passed;
    report.push_back({{"name", r.name},
                      {"entries", r.entries_checked},
                      {"passed", r.passed},
                      {"tolerance", r.tolerance},
                      {"worst_relative_error", r.worst_relative_error}});
    if (!r.passed) {
      err << "FAIL " << r.name << ": worst relative error " << r.worst_relative_error
          << " >= " << r.tolerance << "\n";
    }
  }
  out << nlohmann::json{{"passed", all_passed}, {"results", std::move(report)}}.dump(2) << "\n";
  return all_passed ? kExitOk : kExitFailure;
}

int cmd_stats(const std::string& data, const DataFlags& d, std::ostream& out, std::ostream& err) {
  const std::vector<RawDocument> docs = load_corpus(data, format_for(d, data));
  if (docs.empty()) err << "warning: " << data << " holds no documents\n";
  out << corpus_stats(docs).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Document-as-graph news classifier: train, evaluate and inspect models"};
  app.require_subcommand(1);

  DataFlags data_flags;
  auto add_data_flags = [&data_flags](CLI::App* cmd) {
    cmd->add_option("--format", data_flags.format, "Corpus format (inferred from extension)")
        ->check(CLI::IsMember({"jsonl", "tsv"}));
    cmd->add_option("--edge-weights", data_flags.edge_weights, "Semantic-similarity edge weights (JSONL)");
  };

  TrainFlags tf;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model under a protocol preset");
  train_cmd->add_option("--protocol", tf.protocol)->check(CLI::IsMember({"two_way", "four_way"}));
  train_cmd->add_option("--train", tf.train, "Training corpus")->required();
  train_cmd->add_option("--dev", tf.dev, "Development corpus (two_way)");
  train_cmd->add_option("--test", tf.tests, "Test corpus, repeatable");
  train_cmd->add_option("--model", tf.model)
      ->check(CLI::IsMember({"cnn", "lstm", "gcn", "gcn_ss", "gcn_attn", "gcn_attn_ss", "gat", "gat2"}));
  train_cmd->add_option("--seed", tf.seed);
  train_cmd->add_option("--lr", tf.lr);
  train_cmd->add_option("--epochs", tf.epochs);
  train_cmd->add_option("--max-sentences", tf.max_sentences);
  train_cmd->add_option("--max-tokens", tf.max_tokens);
  train_cmd->add_option("--min-frequency", tf.min_frequency);
  train_cmd->add_option("--embed-dim", tf.embed_dim);
  train_cmd->add_option("--hidden-dim", tf.hidden_dim);
  train_cmd->add_option("--node-dim", tf.node_dim);
  train_cmd->add_option("--gcn-layers", tf.gcn_layers);
  train_cmd->add_flag("--normalize-adjacency", tf.normalize_adjacency);
  train_cmd->add_option("--clip-norm", tf.clip_norm, "Global gradient-norm cap (0 = off)");
  train_cmd->add_option("--out", tf.out, "Checkpoint path")->required();
  train_cmd->add_option("--log", tf.log, "Run log path (default <out>.log.json)");
  add_data_flags(train_cmd);

  CheckpointFlags cf;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Macro-averaged metrics of a checkpoint on a corpus");
  CLI::App* predict_cmd = app.add_subcommand("predict", "Per-document predictions as JSON lines");
  for (CLI::App* cmd : {eval_cmd, predict_cmd}) {
    cmd->add_option("--ckpt", cf.ckpt)->required();
    cmd->add_option("--data", cf.data)->required();
    add_data_flags(cmd);
  }

  CLI::App* export_cmd = app.add_subcommand("export-attention", "Attention heatmap of one document as SVG");
  export_cmd->add_option("--ckpt", cf.ckpt)->required();
  export_cmd->add_option("--data", cf.data)->required();
  export_cmd->add_option("--doc-id", cf.doc_id)->required();
  export_cmd->add_option("--out", cf.out)->required();
  add_data_flags(export_cmd);

  std::uint64_t gradcheck_seed = 1;
  CLI::App* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every op and variant");
  gradcheck_cmd->add_option("--seed", gradcheck_seed);

  std::string stats_data;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("--data", stats_data)->required();
  add_data_flags(stats_cmd);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(tf, data_flags, out, err);
    if (*eval_cmd) return cmd_eval(cf, data_flags, out, err);
    if (*predict_cmd) return cmd_predict(cf, data_flags, out, err);
    if (*export_cmd) return cmd_export_attention(cf, data_flags, out, err);
    if (*gradcheck_cmd) return cmd_gradcheck(gradcheck_seed, out, err);
    if (*stats_cmd) return cmd_stats(stats_data, data_flags, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace docgraph::cli
