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

#include <cmath>
#include <regex>
#include <sstream>

#include "doctest.h"

#include "cli.h"
#include "docgraph/attention_svg.h"
#include "docgraph/checkpoint.h"
#include "test_util.h"

namespace docgraph {
namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "docgraph");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> small_model_flags() {
  return {"--epochs", "2", "--embed-dim", "6", "--hidden-dim", "6", "--node-dim", "3",
          "--min-frequency", "1", "--seed", "5"};
}

// (head, row, col) -> alpha parsed back out of an exported SVG.
std::map<std::tuple<int, int, int>, double> svg_cells(const std::string& svg) {
  static const std::regex cell(
      "data-head=\"(\\d+)\" data-row=\"(\\d+)\" data-col=\"(\\d+)\" data-alpha=\"([^\"]+)\"");
  std::map<std::tuple<int, int, int>, double> cells;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell); it != std::sregex_iterator(); ++it) {
    cells[{std::stoi((*it)[1]), std::stoi((*it)[2]), std::stoi((*it)[3])}] = std::stod((*it)[4]);
  }
  return cells;
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"train", "--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"train", "--train", "x.jsonl"}).code == 2);  // --out missing
  CHECK(run({"train", "--train", "x", "--out", "y", "--model", "bert"}).code == 2);
  CHECK(run({"train", "--train", "x", "--out", "y", "--protocol", "three_way"}).code == 2);
  CHECK(run({"eval", "--ckpt", "a", "--data", "b", "--format", "xml"}).code == 2);
}

TEST_CASE("train reports missing inputs with exit 1") {
  testing::TempDir dir("cli-train");
  const std::string train = dir.file("train.jsonl");
  testing::write_jsonl(train, testing::planted_corpus(ClassSet::four_way().names(), 3, 1));

  Result r = run({"train", "--train", train, "--model", "gcn_ss", "--out", dir.file("m.ckpt")});
  CHECK(r.code == 1);
  CHECK(r.err.find("--edge-weights") != std::string::npos);

  r = run({"train", "--protocol", "two_way", "--train", train, "--out", dir.file("m.ckpt")});
  CHECK(r.code == 1);
  CHECK(r.err.find("--dev") != std::string::npos);

  r = run({"train", "--train", dir.file("absent.jsonl"), "--out", dir.file("m.ckpt")});
  CHECK(r.code == 1);
  CHECK(r.err.find("absent.jsonl") != std::string::npos);

  r = run({"train", "--train", train, "--epochs", "0", "--out", dir.file("m.ckpt")});
  CHECK(r.code == 1);
  CHECK_FALSE(std::filesystem::exists(dir.file("m.ckpt")));
}

TEST_CASE("train, eval, predict and export-attention end to end") {
  testing::TempDir dir("cli-flow");
  const std::vector<RawDocument> raw = testing::planted_corpus(ClassSet::four_way().names(), 5, 2);
  std::vector<RawDocument> test_docs = testing::planted_corpus(ClassSet::four_way().names(), 2, 3);
  for (RawDocument& d : test_docs) d.id = "test-" + d.id;
  // A two-sentence document for the fixed GAT attention pattern.
  test_docs.push_back({"pair", "hoax", "", "The council said so. Critics argued again."});
  const std::string train = dir.file("train.jsonl"), test = dir.file("test.jsonl");
  testing::write_jsonl(train, raw);
  testing::write_jsonl(test, test_docs);
  const std::string ckpt = dir.file("gat2.ckpt");

  std::vector<std::string> args = {"train", "--train", train, "--test", test, "--model", "gat2",
                                   "--out", ckpt};
  for (const std::string& f : small_model_flags()) args.push_back(f);
  Result r = run(args);
  REQUIRE(r.code == 0);
  const nlohmann::json summary = nlohmann::json::parse(r.out);
  CHECK(summary["checkpoint"] == ckpt);
  const nlohmann::json log = nlohmann::json::parse(testing::read_file(ckpt + ".log.json"));
  CHECK(log["epochs"].size() == 2);
  CHECK(log["protocol"] == "four_way");
  CHECK(log["train_documents"] == 16);
  CHECK(log["dev_documents"] == 4);
  REQUIRE(log["tests"].size() == 1);
  CHECK(log["tests"][0]["metrics"]["count"] == test_docs.size());
  CHECK(r.err.find("epoch 2") != std::string::npos);

  SUBCASE("eval prints metrics for the test file") {
    const Result e = run({"eval", "--ckpt", ckpt, "--data", test});
    REQUIRE(e.code == 0);
    const nlohmann::json m = nlohmann::json::parse(e.out);
    CHECK(m == log["tests"][0]["metrics"]);
  }

  SUBCASE("predict emits one normalized line per document") {
    const Result p = run({"predict", "--ckpt", ckpt, "--data", test});
    REQUIRE(p.code == 0);
    std::istringstream lines(p.out);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
      const nlohmann::json j = nlohmann::json::parse(line);
      CHECK(j["id"] == test_docs[count].id);
      double total = 0.0, best = -1.0;
      std::string best_name;
      for (const auto& [name, prob] : j["probabilities"].items()) {
        total += prob.get<double>();
        if (prob.get<double>() > best) {
          best = prob.get<double>();
          best_name = name;
        }
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
      CHECK(j["predicted"] == best_name);
      ++count;
    }
    CHECK(count == test_docs.size());
  }

  SUBCASE("exported attention equals the forward pass") {
    const Checkpoint loaded = load_checkpoint(ckpt);
    for (const RawDocument& d : test_docs) {
      const std::string svg_path = dir.file(d.id + ".svg");
      const Result x = run({"export-attention", "--ckpt", ckpt, "--data", test, "--doc-id", d.id,
                            "--out", svg_path});
      REQUIRE(x.code == 0);
      const auto cells = svg_cells(testing::read_file(svg_path));
      const Document doc = encode_document(d, loaded.vocabulary, loaded.model.config().classes(),
                                           loaded.model.config().encode_options());
      Tape tape;
      const ForwardResult fwd = loaded.model.forward(tape, doc, nullptr);
      REQUIRE(fwd.attention.size() == 2);
      const std::size_t n = doc.n_sentences();
      CHECK(cells.size() == 2 * n * n);
      for (int h = 0; h < 2; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const double alpha = cells.at({h, static_cast<int>(i), static_cast<int>(j)});
            CHECK(std::abs(alpha - fwd.attention[h].value()(i, j)) < 1e-9);
          }
        }
      }
    }
    const auto pair = svg_cells(testing::read_file(dir.file("pair.svg")));
    for (int h = 0; h < 2; ++h) {
      CHECK(pair.at({h, 0, 0}) == 0.0);
      CHECK(pair.at({h, 0, 1}) == 1.0);
      CHECK(pair.at({h, 1, 0}) == 1.0);
      CHECK(pair.at({h, 1, 1}) == 0.0);
    }
    const std::string svg = testing::read_file(dir.file("pair.svg"));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("data-doc-id=\"pair\"") != std::string::npos);
    CHECK(svg.find("Critics argued again.") != std::string::npos);
  }

  SUBCASE("export-attention failures") {
    Result x = run({"export-attention", "--ckpt", ckpt, "--data", test, "--doc-id", "nope", "--out",
                    dir.file("n.svg")});
    CHECK(x.code == 1);
    CHECK(x.err.find("nope") != std::string::npos);
    std::vector<std::string> cnn_args = {"train", "--train", train, "--model", "cnn", "--out",
                                         dir.file("cnn.ckpt")};
    for (const std::string& f : small_model_flags()) cnn_args.push_back(f);
    REQUIRE(run(cnn_args).code == 0);
    x = run({"export-attention", "--ckpt", dir.file("cnn.ckpt"), "--data", test, "--doc-id", "pair",
             "--out", dir.file("c.svg")});
    CHECK(x.code == 1);
    CHECK(x.err.find("attention") != std::string::npos);
  }

  SUBCASE("eval failures") {
    const std::string empty = dir.file("empty.jsonl");
    testing::write_text(empty, "\n");
    Result e = run({"eval", "--ckpt", ckpt, "--data", empty});
    CHECK(e.code == 1);
    CHECK(e.err.find("no documents") != std::string::npos);
    const std::string foreign = dir.file("foreign.jsonl");
    testing::write_text(foreign, "{\"label\":\"opinion\",\"text\":\"A b.\"}\n");
    e = run({"eval", "--ckpt", ckpt, "--data", foreign});
    CHECK(e.code == 1);
    CHECK(e.err.find("opinion") != std::string::npos);
    e = run({"eval", "--ckpt", dir.file("missing.ckpt"), "--data", test});
    CHECK(e.code == 1);
  }
}

TEST_CASE("SS variants read edge weights from the command line") {
  testing::TempDir dir("cli-ss");
  const std::vector<RawDocument> raw = testing::planted_corpus(ClassSet::four_way().names(), 3, 6);
  const std::string train = dir.file("train.jsonl");
  testing::write_jsonl(train, raw);
  Rng rng(2);
  std::vector<std::pair<std::string, Tensor>> weights;
  for (const RawDocument& d : raw) {
    weights.emplace_back(d.id, testing::random_edge_weights(split_sentences(d.text).size(), rng));
  }
  const std::string ss = dir.file("ss.jsonl");
  testing::write_edge_weights(ss, weights);
  std::vector<std::string> args = {"train", "--train", train, "--model", "gcn_attn_ss",
                                   "--edge-weights", ss, "--out", dir.file("m.ckpt")};
  for (const std::string& f : small_model_flags()) args.push_back(f);
  REQUIRE(run(args).code == 0);
  CHECK(run({"eval", "--ckpt", dir.file("m.ckpt"), "--data", train, "--edge-weights", ss}).code == 0);
  const Result e = run({"eval", "--ckpt", dir.file("m.ckpt"), "--data", train});
  CHECK(e.code == 1);
  CHECK(e.err.find("--edge-weights") != std::string::npos);
}

TEST_CASE("stats on a hand-counted fixture") {
  testing::TempDir dir("cli-stats");
  const std::string path = dir.file("six.tsv");
  // TSV rows carry no source; use JSONL to cover per_source.
  const std::string jsonl = dir.file("six.jsonl");
  testing::write_jsonl(jsonl, {{"1", "trusted", "a", "One two. Three four five."},
                               {"2", "trusted", "a", "Hello world."},
                               {"3", "satire", "b", "A b c d. E f. G."},
                               {"4", "satire", "b", "Mr. Smith left."},
                               {"5", "hoax", "c", "Wow!"},
                               {"6", "propaganda", "", "Yes. No. Maybe so."}});
  const Result r = run({"stats", "--data", jsonl});
  REQUIRE(r.code == 0);
  const nlohmann::json s = nlohmann::json::parse(r.out);
  CHECK(s["documents"] == 6);
  CHECK(s["sentences"] == 11);
  CHECK(s["tokens"] == 34);
  CHECK(s["per_class"] == nlohmann::json{{"hoax", 1}, {"propaganda", 1}, {"satire", 2}, {"trusted", 2}});
  CHECK(s["per_source"] == nlohmann::json{{"", 1}, {"a", 2}, {"b", 2}, {"c", 1}});
  CHECK(s["sentences_per_document"] ==
        nlohmann::json::parse(R"([{"count":3,"length":1},{"count":1,"length":2},{"count":2,"length":3}])"));
  CHECK(s["tokens_per_sentence"] == nlohmann::json::parse(
                                        R"([{"count":4,"length":2},{"count":4,"length":3},)"
                                        R"({"count":1,"length":4},{"count":2,"length":5}])"));

  testing::write_text(path, "");
  const Result empty = run({"stats", "--data", path});
  CHECK(empty.code == 0);
  CHECK(empty.err.find("warning") != std::string::npos);
  CHECK(nlohmann::json::parse(empty.out)["documents"] == 0);
}

TEST_CASE("gradcheck command passes and lists results") {
  const Result r = run({"gradcheck"});
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["results"].size() > 30);
}

TEST_CASE("TSV input through predict") {
  testing::TempDir dir("cli-tsv");
  const std::vector<RawDocument> raw = testing::planted_corpus(ClassSet::four_way().names(), 3, 7);
  const std::string train = dir.file("train.jsonl");
  testing::write_jsonl(train, raw);
  std::vector<std::string> args = {"train", "--train", train, "--model", "lstm", "--out",
                                   dir.file("m.ckpt")};
  for (const std::string& f : small_model_flags()) args.push_back(f);
  REQUIRE(run(args).code == 0);
  const std::string tsv = dir.file("docs.tsv");
  testing::write_text(tsv, "hoax\tThe council said so.\nsatire\tPeople asked again. Roads and water.\n");
  const Result p = run({"predict", "--ckpt", dir.file("m.ckpt"), "--data", tsv});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("\"id\":\"row-1\"") != std::string::npos);
}

}  // namespace
}  // namespace docgraph
