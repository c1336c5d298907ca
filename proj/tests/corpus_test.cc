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
#include <map>
#include <set>

#include "doctest.h"

#include "docgraph/corpus.h"
#include "docgraph/error.h"
#include "test_util.h"

namespace docgraph {
namespace {

using Strings = std::vector<std::string>;

TEST_CASE("split_sentences on terminators followed by a capital") {
  CHECK(split_sentences("It rained. Roads flooded! Was it bad? Yes.") ==
        Strings{"It rained.", "Roads flooded!", "Was it bad?", "Yes."});
}

TEST_CASE("split_sentences keeps abbreviations and lowercase continuations") {
  CHECK(split_sentences("Mr. Smith met Dr. Jones at St. Paul. They talked.") ==
        Strings{"Mr. Smith met Dr. Jones at St. Paul.", "They talked."});
  CHECK(split_sentences("The U.S. Senate voted. It passed.") ==
        Strings{"The U.S. Senate voted.", "It passed."});
  CHECK(split_sentences("Prices rose 3.5 percent. e.g. this one.") ==
        Strings{"Prices rose 3.5 percent. e.g. this one."});
}

TEST_CASE("split_sentences absorbs closing quotes and brackets") {
  CHECK(split_sentences("He said \"Stop.\" Then he left.") ==
        Strings{"He said \"Stop.\"", "Then he left."});
  CHECK(split_sentences("It ended (finally.) \"Next\" came.") ==
        Strings{"It ended (finally.)", "\"Next\" came."});
}

TEST_CASE("split_sentences collapses runs of terminators and whitespace") {
  CHECK(split_sentences("  What?!   Really...  \n\t 2020 was odd.  ") ==
        Strings{"What?!", "Really...", "2020 was odd."});
  CHECK(split_sentences("no terminator at all") == Strings{"no terminator at all"});
  CHECK(split_sentences("   ").empty());
}

TEST_CASE("split_sentences round-trips normalized text") {
  // Joining the sentences with single spaces gives back the normalized input.
  const std::string text = "A b. C d!  E \"f?\" G h.\nI j";
  const Strings parts = split_sentences(text);
  std::string joined;
  for (const std::string& p : parts) joined += (joined.empty() ? "" : " ") + p;
  CHECK(joined == "A b. C d! E \"f?\" G h. I j");
}

TEST_CASE("tokenize lowercases and peels outer punctuation") {
  CHECK(tokenize("Hello, World!") == Strings{"hello", ",", "world", "!"});
  CHECK(tokenize("\"Don't\" (U.S.)") == Strings{"\"", "don't", "\"", "(", "u.s", ".", ")"});
  CHECK(tokenize("state-of-the-art 3.14") == Strings{"state-of-the-art", "3.14"});
  CHECK(tokenize("...") == Strings{".", ".", "."});
  CHECK(tokenize("  ").empty());
}

TEST_CASE("ClassSet lowercases and rejects bad sets") {
  const ClassSet set({"Trusted", "SATIRE"});
  CHECK(set.names() == Strings{"trusted", "satire"});
  CHECK(set.find("Satire") == std::optional<std::size_t>(1));
  CHECK_FALSE(set.contains("hoax"));
  CHECK_THROWS_AS(ClassSet({"a"}), ConfigError);
  CHECK_THROWS_AS(ClassSet({"a", "A"}), ConfigError);
  CHECK(ClassSet::four_way().names() == Strings{"trusted", "satire", "hoax", "propaganda"});
}

TEST_CASE("build_vocab ranks by frequency then spelling and honors the cutoff") {
  const std::vector<RawDocument> docs = {
      {"a", "trusted", "", "Beta alpha beta. Gamma beta alpha delta."},
      {"b", "satire", "", "Delta alpha."},
  };
  // counts: alpha 3, beta 3, delta 2, "." 3, gamma 1
  const Vocabulary v = build_vocab(docs, 2);
  CHECK(v.tokens() == Strings{"<pad>", "<unk>", ".", "alpha", "beta", "delta"});
  CHECK(v.id("gamma") == Vocabulary::kUnk);
  CHECK(v.id("beta") == 4);
  CHECK(v.token(5) == "delta");
  CHECK(build_vocab(docs, 1).size() == 7);
}

TEST_CASE("Vocabulary::from_tokens rejects duplicates and reserved entries") {
  const Strings dup = {"a", "a"};
  CHECK_THROWS_AS(Vocabulary::from_tokens(dup, 1), ConfigError);
  const Strings reserved = {"<unk>"};
  CHECK_THROWS_AS(Vocabulary::from_tokens(reserved, 1), ConfigError);
}

TEST_CASE("encode_document applies caps and drops empty sentences") {
  const std::vector<RawDocument> docs = {{"d", "satire", "", "One two three four. Five six. Seven."}};
  const Vocabulary v = build_vocab(docs, 1);
  const Document doc = encode_document(docs[0], v, ClassSet::two_way(), EncodeOptions{2, 3});
  CHECK(doc.label == 1);
  REQUIRE(doc.n_sentences() == 2);
  CHECK(doc.sentences[0] == TokenIds{v.id("one"), v.id("two"), v.id("three")});
  CHECK(doc.sentences[1] == TokenIds{v.id("five"), v.id("six"), v.id(".")});
  CHECK(doc.flattened().size() == 6);

  const RawDocument foreign{"x", "hoax", "", "Text."};
  CHECK_THROWS_WITH_AS(encode_document(foreign, v, ClassSet::two_way(), {}),
                       doctest::Contains("x"), ConfigError);
}

TEST_CASE("load_corpus reads JSONL and TSV") {
  testing::TempDir dir("corpus");
  const std::string jsonl = dir.file("c.jsonl");
  testing::write_text(jsonl,
                      "{\"id\":\"n1\",\"label\":\"Trusted\",\"text\":\"A b.\",\"source\":\"wire\"}\n"
                      "\n"
                      "{\"label\":\"satire\",\"text\":\"C d.\"}\r\n");
  const std::vector<RawDocument> docs = load_corpus(jsonl, infer_corpus_format(jsonl));
  REQUIRE(docs.size() == 2);
  CHECK(docs[0] == RawDocument{"n1", "Trusted", "wire", "A b."});
  CHECK(docs[1].id == "row-1");

  const std::string tsv = dir.file("c.tsv");
  testing::write_text(tsv, "satire\tHello there.\nhoax\tWorld.\n");
  CHECK(infer_corpus_format(tsv) == CorpusFormat::kTsv);
  const std::vector<RawDocument> rows = load_corpus(tsv, CorpusFormat::kTsv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == RawDocument{"row-1", "hoax", "", "World."});
}

TEST_CASE("load_corpus reports file and line for malformed records") {
  testing::TempDir dir("corpus-bad");
  const std::string path = dir.file("bad.jsonl");
  testing::write_text(path, "{\"label\":\"satire\",\"text\":\"ok.\"}\n{\"label\":\"satire\"}\n");
  CHECK_THROWS_WITH_AS(load_corpus(path, CorpusFormat::kJsonl), doctest::Contains("bad.jsonl:2"),
                       ParseError);
  testing::write_text(path, "{not json}\n");
  CHECK_THROWS_AS(load_corpus(path, CorpusFormat::kJsonl), ParseError);
  testing::write_text(path, "{\"label\":\"satire\",\"text\":\"   \"}\n");
  CHECK_THROWS_WITH_AS(load_corpus(path, CorpusFormat::kJsonl), doctest::Contains("empty text"),
                       ParseError);
  testing::write_text(path, "{\"label\":\"opinion\",\"text\":\"x\"}\n");
  const ClassSet two = ClassSet::two_way();
  CHECK_THROWS_WITH_AS(load_corpus(path, CorpusFormat::kJsonl, &two), doctest::Contains("opinion"),
                       ParseError);
  CHECK_THROWS_AS(load_corpus(dir.file("missing.jsonl"), CorpusFormat::kJsonl), ParseError);
  CHECK_THROWS_AS(parse_corpus_format("csv"), ConfigError);
}

TEST_CASE("filter_by_class keeps order") {
  std::vector<RawDocument> docs = {{"1", "hoax", "", "a"}, {"2", "Satire", "", "b"},
                                   {"3", "trusted", "", "c"}};
  const std::vector<RawDocument> kept = filter_by_class(docs, ClassSet::two_way());
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == "2");
  CHECK(kept[1].id == "3");
}

TEST_CASE("stratified_split is exact per class, disjoint and seeded") {
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < 3; ++c) labels.insert(labels.end(), 10 + 7 * c, c);
  const auto [train, dev] = stratified_split(labels, 0.8, 42);
  CHECK(std::is_sorted(train.begin(), train.end()));
  CHECK(std::is_sorted(dev.begin(), dev.end()));
  std::set<std::size_t> all(train.begin(), train.end());
  all.insert(dev.begin(), dev.end());
  CHECK(all.size() == labels.size());
  CHECK(train.size() + dev.size() == labels.size());
  std::map<std::size_t, std::size_t> per_class;
  for (std::size_t i : train) ++per_class[labels[i]];
  CHECK(per_class[0] == 8);   // round(0.8 * 10)
  CHECK(per_class[1] == 14);  // round(0.8 * 17) = 13.6
  CHECK(per_class[2] == 19);  // round(0.8 * 24) = 19.2

  CHECK(stratified_split(labels, 0.8, 42) == stratified_split(labels, 0.8, 42));
  CHECK(stratified_split(labels, 0.8, 42) != stratified_split(labels, 0.8, 43));

  const std::vector<std::size_t> two = {0, 0};
  const auto [t2, d2] = stratified_split(two, 0.99, 1);
  CHECK(t2.size() == 1);
  CHECK(d2.size() == 1);
  const std::vector<std::size_t> lonely = {0, 0, 1};
  CHECK_THROWS_AS(stratified_split(lonely, 0.8, 1), ConfigError);
}

TEST_CASE("split_train_dev keeps documents in input order") {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < 10; ++i) docs.push_back({"d" + std::to_string(i), i % 2, {{2}}});
  const auto [train, dev] = split_train_dev(docs, 0.8, 5);
  CHECK(train.size() == 8);
  CHECK(dev.size() == 2);
  CHECK(std::is_sorted(train.begin(), train.end(),
                       [](const Document& a, const Document& b) { return a.id < b.id; }));
}

}  // namespace
}  // namespace docgraph
