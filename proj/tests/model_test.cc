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

#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "docgraph/error.h"
#include "docgraph/model.h"
#include "test_util.h"

namespace docgraph {
namespace {

ModelConfig small_config(Variant v, std::size_t classes = 2) {
  ModelConfig c;
  c.variant = v;
  c.class_names = classes == 2 ? ClassSet::two_way().names() : ClassSet::four_way().names();
  c.vocab_size = 30;
  c.embed_dim = 5;
  c.hidden_dim = 6;
  c.node_dim = 4;
  c.seed = 11;
  return c;
}

// Scalar count from the layer shapes.
std::size_t expected_parameters(const ModelConfig& c) {
  const std::size_t v = c.vocab_size, e = c.embed_dim, h = c.hidden_dim, f = c.node_dim,
                    k = c.num_classes();
  const std::size_t lstm = v * e + e * 4 * h + h * 4 * h + 4 * h;
  std::size_t body = 0, pooled = f;
  switch (c.variant) {
    case Variant::kCnn: body = v * e + 3 * e * h + h; pooled = h; break;
    case Variant::kLstm: body = lstm; pooled = h; break;
    case Variant::kGcn:
    case Variant::kGcnSs: body = lstm + h * f; break;
    case Variant::kGcnAttn:
    case Variant::kGcnAttnSs: body = lstm + h * f + 3 * f * f; break;
    case Variant::kGat: body = lstm + h * f + 2 * f; break;
    case Variant::kGat2: body = lstm + 2 * (h * f + 2 * f); pooled = 2 * f; break;
  }
  return body + pooled * k + k;
}

EdgeWeightSet weights_for(const std::vector<Document>& docs, Rng& rng) {
  EdgeWeightSet set;
  for (const Document& d : docs) set.insert(d.id, testing::random_edge_weights(d.n_sentences(), rng));
  return set;
}

TEST_CASE("variant names round-trip") {
  for (Variant v : kAllVariants) CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS(parse_variant("bert"), ConfigError);
  CHECK(gat_heads(Variant::kGat2) == 2);
  CHECK(uses_edge_weights(Variant::kGcnAttnSs));
  CHECK_FALSE(uses_edge_weights(Variant::kGat));
}

TEST_CASE("parameter counts follow the layer shapes") {
  for (Variant v : kAllVariants) {
    for (std::size_t classes : {2, 4}) {
      const ModelConfig c = small_config(v, classes);
      CAPTURE(variant_name(v));
      CHECK(Model(c).parameters().scalar_count() == expected_parameters(c));
    }
  }
  ModelConfig defaults = small_config(Variant::kGat2);
  defaults.embed_dim = defaults.hidden_dim = 100;
  defaults.node_dim = 32;
  defaults.vocab_size = 1000;
  CHECK(Model(defaults).parameters().scalar_count() == 100 * 1000 + 87058);

  ModelConfig deep = small_config(Variant::kGcn);
  deep.gcn_layers = 3;
  CHECK(Model(deep).parameters().scalar_count() == expected_parameters(small_config(Variant::kGcn)) + 2 * 4 * 4);
}

TEST_CASE("parameter names are stable") {
  const Model gat2(small_config(Variant::kGat2));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < gat2.parameters().size(); ++i) names.push_back(gat2.parameters()[i].name);
  CHECK(names == std::vector<std::string>{"encoder.embedding", "encoder.lstm.w_input",
                                          "encoder.lstm.w_hidden", "encoder.lstm.bias",
                                          "gat.head0.weight", "gat.head0.attention",
                                          "gat.head1.weight", "gat.head1.attention",
                                          "projection.weight", "projection.bias"});
}

TEST_CASE("same seed gives the same model, another seed a different one") {
  const ModelConfig c = small_config(Variant::kGcnAttn);
  ModelConfig other = c;
  other.seed = 12;
  const Model a(c), b(c), d(other);
  CHECK(a.parameters().snapshot() == b.parameters().snapshot());
  CHECK(a.parameters().snapshot() != d.parameters().snapshot());
}

TEST_CASE("graph variants ignore sentence order; sequence baselines do not") {
  Rng rng(3);
  std::vector<Document> docs, shuffled;
  for (int i = 0; i < 6; ++i) {
    Document d = testing::random_document("d" + std::to_string(i), 3 + rng.below(5), 30, rng);
    Document s = d;
    s.id += "-r";
    std::reverse(s.sentences.begin(), s.sentences.end());
    docs.push_back(d);
    shuffled.push_back(s);
  }
  EdgeWeightSet weights;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::size_t n = docs[i].n_sentences();
    const Tensor w = testing::random_edge_weights(n, rng);
    Tensor r(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) r(a, b) = w(n - 1 - a, n - 1 - b);
    }
    weights.insert(docs[i].id, w);
    weights.insert(shuffled[i].id, r);
  }
  for (Variant v : kAllVariants) {
    CAPTURE(variant_name(v));
    const Model m(small_config(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      worst = std::max(worst, max_abs_diff(m.logits(docs[i], &weights), m.logits(shuffled[i], &weights)));
    }
    if (is_graph_variant(v)) {
      CHECK(worst < 1e-12);
    } else {
      CHECK(worst > 1e-9);
    }
  }
}

TEST_CASE("zeroed weights leave only the projection bias") {
  const Document doc{"d", 0, {{2, 3, 4}, {5, 6}}};
  EdgeWeightSet weights;
  weights.insert("d", Tensor::from_rows({{0, 0.4}, {0.4, 0}}));
  for (Variant v : kAllVariants) {
    CAPTURE(variant_name(v));
    Model m(small_config(v));
    ParameterStore& store = m.parameters();
    for (std::size_t i = 0; i < store.size(); ++i) store[i].value.fill(0.0);
    store.at("projection.bias").value = Tensor::row({0.3, -0.1});
    CHECK(m.logits(doc, &weights) == Tensor::row({0.3, -0.1}));
  }
}

TEST_CASE("single-sentence documents skip message passing") {
  const Document doc{"one", 1, {{2, 7, 9}}};
  for (Variant v : kAllVariants) {
    CAPTURE(variant_name(v));
    const Model m(small_config(v));
    EdgeWeightSet weights;
    weights.insert("one", Tensor(1, 1));
    Tape tape;
    const ForwardResult r = m.forward(tape, doc, &weights);
    CHECK(r.logits.value().all_finite());
    if (gat_heads(v) > 0) CHECK(r.attention.empty());
  }
  // gcn: logits = (z W) P + b with z the sentence encoding.
  const Model gcn(small_config(Variant::kGcn));
  const ParameterStore& p = gcn.parameters();
  Tape tape;
  const EncoderVars enc{tape.parameter(p.at("encoder.embedding")),
                        LstmVars{tape.parameter(p.at("encoder.lstm.w_input")),
                                 tape.parameter(p.at("encoder.lstm.w_hidden")),
                                 tape.parameter(p.at("encoder.lstm.bias")), 6}};
  const Tensor z = encode_document(doc, enc).value();
  Tensor expected = matmul(matmul(z, p.at("gcn.0.weight").value), p.at("projection.weight").value);
  expected += p.at("projection.bias").value;
  CHECK(max_abs_diff(gcn.logits(doc, nullptr), expected) < 1e-14);
}

TEST_CASE("edge weights drive the SS variants only") {
  Rng rng(9);
  const std::vector<Document> docs = {testing::random_document("a", 4, 30, rng)};
  const EdgeWeightSet w1 = weights_for(docs, rng), w2 = weights_for(docs, rng);
  const Model ss(small_config(Variant::kGcnSs));
  CHECK(max_abs_diff(ss.logits(docs[0], &w1), ss.logits(docs[0], &w2)) > 1e-9);
  CHECK_THROWS_WITH_AS(ss.logits(docs[0], nullptr), doctest::Contains("edge weights"), ConfigError);
  const Model gat(small_config(Variant::kGat));
  CHECK(gat.logits(docs[0], &w1) == gat.logits(docs[0], nullptr));
  const Model gcn(small_config(Variant::kGcn));
  CHECK(gcn.logits(docs[0], &w1) == gcn.logits(docs[0], nullptr));
}

TEST_CASE("normalize_adjacency changes the gcn propagation") {
  Rng rng(10);
  const Document doc = testing::random_document("a", 5, 30, rng);
  ModelConfig c = small_config(Variant::kGcn);
  const Model plain(c);
  c.normalize_adjacency = true;
  const Model normalized(c);
  CHECK(plain.parameters().snapshot() == normalized.parameters().snapshot());
  CHECK(max_abs_diff(plain.logits(doc, nullptr), normalized.logits(doc, nullptr)) > 1e-9);
}

TEST_CASE("forward validates inputs") {
  const Model m(small_config(Variant::kGat));
  CHECK_THROWS_AS(m.logits(Document{"e", 0, {}}, nullptr), ShapeError);
  CHECK_THROWS_WITH_AS(m.logits(Document{"big", 0, {{2, 30}}}, nullptr), doctest::Contains("big"),
                       ConfigError);
  ModelConfig bad = small_config(Variant::kGcn);
  bad.class_names = {"only"};
  CHECK_THROWS_AS(Model{bad}, ConfigError);
  bad = small_config(Variant::kGcn);
  bad.node_dim = 0;
  CHECK_THROWS_AS(Model{bad}, ConfigError);
}

TEST_CASE("attention outputs are row-stochastic") {
  Rng rng(12);
  const Document doc = testing::random_document("a", 7, 30, rng);
  EdgeWeightSet w;
  w.insert("a", testing::random_edge_weights(7, rng));
  for (Variant v : {Variant::kGcnAttn, Variant::kGcnAttnSs, Variant::kGat, Variant::kGat2}) {
    CAPTURE(variant_name(v));
    const Model m(small_config(v));
    Tape tape;
    const ForwardResult r = m.forward(tape, doc, &w);
    CHECK(r.attention.size() == std::max<std::size_t>(1, gat_heads(v)));
    for (const Var& a : r.attention) {
      for (std::size_t i = 0; i < 7; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < 7; ++j) total += a.value()(i, j);
        CHECK(std::abs(total - 1.0) < 1e-12);
        if (gat_heads(v) > 0) CHECK(a.value()(i, i) == 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace docgraph
