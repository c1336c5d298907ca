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

#include "doctest.h"

#include "docgraph/checkpoint.h"
#include "docgraph/error.h"
#include "test_util.h"

namespace docgraph {
namespace {

Checkpoint make_checkpoint(Variant v) {
  const std::vector<std::string> tokens = {"alpha", "beta", "gamma"};
  Vocabulary vocab = Vocabulary::from_tokens(tokens, 2);
  ModelConfig c;
  c.variant = v;
  c.class_names = ClassSet::four_way().names();
  c.vocab_size = vocab.size();
  c.embed_dim = 3;
  c.hidden_dim = 4;
  c.node_dim = 2;
  c.seed = 8;
  c.learning_rate = 0.003;
  c.leaky_slope = 0.1;
  Checkpoint ckpt{Model(c), std::move(vocab), TrainingMetadata{8, 3, 0.625, 5}};
  // Values that stress the encoding.
  ckpt.model.parameters()[0].value[0] = -0.0;
  ckpt.model.parameters()[0].value[1] = 1e-310;
  ckpt.model.parameters()[0].value[2] = 0.1;
  return ckpt;
}

// Replaces the first occurrence of `from` in the manifest.
std::string tamper(std::string bytes, const std::string& from, const std::string& to) {
  const std::size_t at = bytes.find(from);
  REQUIRE(at != std::string::npos);
  return bytes.replace(at, from.size(), to);
}

TEST_CASE("checkpoints round-trip bit for bit") {
  for (Variant v : kAllVariants) {
    CAPTURE(variant_name(v));
    const Checkpoint ckpt = make_checkpoint(v);
    const std::string bytes = serialize_checkpoint(ckpt);
    const Checkpoint back = parse_checkpoint(bytes);
    CHECK(back.model.config() == ckpt.model.config());
    CHECK(back.vocabulary == ckpt.vocabulary);
    CHECK(back.metadata == ckpt.metadata);
    CHECK(back.model.parameters().snapshot() == ckpt.model.parameters().snapshot());
    CHECK(std::signbit(back.model.parameters()[0].value[0]));
    CHECK(serialize_checkpoint(back) == bytes);
  }
}

TEST_CASE("save and load through a file") {
  testing::TempDir dir("ckpt");
  const Checkpoint ckpt = make_checkpoint(Variant::kGat2);
  save_checkpoint(ckpt, dir.file("m.ckpt"));
  const Checkpoint back = load_checkpoint(dir.file("m.ckpt"));
  const Document doc{"d", 0, {{2, 3}, {4}, {3, 3, 2}}};
  CHECK(back.model.logits(doc, nullptr) == ckpt.model.logits(doc, nullptr));
  CHECK_THROWS_AS(load_checkpoint(dir.file("missing.ckpt")), Error);
}

TEST_CASE("corrupt checkpoints are rejected") {
  const std::string bytes = serialize_checkpoint(make_checkpoint(Variant::kGcnAttn));
  CHECK_THROWS_WITH_AS(parse_checkpoint("garbage"), doctest::Contains("not a docgraph checkpoint"),
                       ParseError);
  CHECK_THROWS_AS(parse_checkpoint(bytes.substr(0, bytes.size() - 8)), ParseError);
  CHECK_THROWS_AS(parse_checkpoint(bytes + "x"), ParseError);
  CHECK_THROWS_AS(parse_checkpoint(bytes.substr(0, 30)), ParseError);
  CHECK_THROWS_WITH_AS(parse_checkpoint(tamper(bytes, "\"format_version\":1", "\"format_version\":2")),
                       doctest::Contains("version"), ParseError);
  CHECK_THROWS_AS(parse_checkpoint(tamper(bytes, "attention.query", "attention.quark")), ConfigError);
  CHECK_THROWS_AS(parse_checkpoint(tamper(bytes, "\"vocab_size\":5", "\"vocab_size\":6")), ConfigError);
  CHECK_THROWS_AS(parse_checkpoint(tamper(bytes, "\"variant\":\"gcn_attn\"", "\"variant\":\"gcn\"")),
                  ConfigError);
}

TEST_CASE("require_variant names both variants") {
  const Checkpoint ckpt = make_checkpoint(Variant::kGat);
  CHECK_NOTHROW(ckpt.require_variant(Variant::kGat));
  CHECK_THROWS_WITH_AS(ckpt.require_variant(Variant::kGcn), doctest::Contains("gat"), ConfigError);
}

TEST_CASE("config JSON round-trips") {
  const ModelConfig c = make_checkpoint(Variant::kGcnSs).model.config();
  CHECK(config_from_json(config_to_json(c)) == c);
  nlohmann::json broken = config_to_json(c);
  broken.erase("node_dim");
  CHECK_THROWS_AS(config_from_json(broken), ParseError);
}

}  // namespace
}  // namespace docgraph
