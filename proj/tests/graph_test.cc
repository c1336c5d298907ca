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

#include "doctest.h"

#include "docgraph/error.h"
#include "docgraph/graph.h"
#include "test_util.h"

namespace docgraph {
namespace {

TEST_CASE("build_adjacency is complete without self loops") {
  CHECK(build_adjacency(3) == Tensor::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(build_adjacency(1) == Tensor::from_rows({{0}}));
}

TEST_CASE("row_normalized divides by row sums and leaves empty rows") {
  const Tensor e = Tensor::from_rows({{0, 1, 3}, {0, 0, 0}, {2, 2, 0}});
  CHECK(row_normalized(e) == Tensor::from_rows({{0, 0.25, 0.75}, {0, 0, 0}, {0.5, 0.5, 0}}));
}

TEST_CASE("EdgeWeightSet validates matrices") {
  EdgeWeightSet set;
  set.insert("ok", Tensor::from_rows({{0, 0.5}, {0.5, 0}}));
  CHECK_THROWS_AS(set.insert("ok", Tensor::from_rows({{0, 0.5}, {0.5, 0}})), ParseError);
  CHECK_THROWS_AS(set.insert("diag", Tensor::from_rows({{0.1, 0.5}, {0.5, 0}})), ParseError);
  CHECK_THROWS_AS(set.insert("asym", Tensor::from_rows({{0, 0.5}, {0.4, 0}})), ParseError);
  CHECK_THROWS_AS(set.insert("range", Tensor::from_rows({{0, 1.5}, {1.5, 0}})), ParseError);
  CHECK_THROWS_AS(set.insert("shape", Tensor(2, 3)), ParseError);
  set.insert("nearly", Tensor::from_rows({{0, 0.5}, {0.5 + 1e-12, 0}}));
  CHECK(set.size() == 2);
}

TEST_CASE("adjacency_for takes the leading block") {
  EdgeWeightSet set;
  set.insert("d", Tensor::from_rows({{0, 0.1, 0.2}, {0.1, 0, 0.3}, {0.2, 0.3, 0}}));
  CHECK(set.adjacency_for("d", 2) == Tensor::from_rows({{0, 0.1}, {0.1, 0}}));
  CHECK(set.adjacency_for("d", 3) == *set.find("d"));
  CHECK_THROWS_AS(set.adjacency_for("d", 4), ConfigError);
  CHECK_THROWS_WITH_AS(set.adjacency_for("other", 2), doctest::Contains("other"), ConfigError);
}

TEST_CASE("load_edge_weights reads JSONL and reports the line") {
  testing::TempDir dir("graph");
  const std::string path = dir.file("w.jsonl");
  Rng rng(1);
  const Tensor w = testing::random_edge_weights(4, rng);
  testing::write_edge_weights(path, {{"a", w}, {"b", Tensor(1, 1)}});
  const EdgeWeightSet set = load_edge_weights(path);
  REQUIRE(set.find("a") != nullptr);
  CHECK(*set.find("a") == w);
  CHECK(set.find("b")->rows() == 1);

  testing::write_text(path, "{\"id\":\"a\",\"n\":2,\"weights\":[[0,1],[1,0]]}\n"
                            "{\"id\":\"b\",\"n\":2,\"weights\":[[0,1]]}\n");
  CHECK_THROWS_WITH_AS(load_edge_weights(path), doctest::Contains("w.jsonl:2"), ParseError);
  testing::write_text(path, "{\"id\":\"a\",\"n\":2,\"weights\":[[0,1],[0.5,0]]}\n");
  CHECK_THROWS_WITH_AS(load_edge_weights(path), doctest::Contains("asymmetric"), ParseError);
  CHECK_THROWS_AS(load_edge_weights(dir.file("none.jsonl")), ParseError);
}

TEST_CASE("build_graph picks binary or supplied weights") {
  const Document doc{"d", 0, {{2}, {3}, {4}}};
  Tape tape;
  const Var features = tape.constant(Tensor(3, 2, 1.0));
  CHECK(build_graph(doc, features, nullptr).adjacency == build_adjacency(3));
  EdgeWeightSet set;
  const Tensor w = Tensor::from_rows({{0, 0.1, 0.2}, {0.1, 0, 0.3}, {0.2, 0.3, 0}});
  set.insert("d", w);
  const DocumentGraph g = build_graph(doc, features, &set);
  CHECK(g.n == 3);
  CHECK(g.adjacency == w);
  CHECK_THROWS_AS(build_graph(doc, tape.constant(Tensor(2, 2)), nullptr), ShapeError);
}

}  // namespace
}  // namespace docgraph
