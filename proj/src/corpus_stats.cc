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

#include "docgraph/corpus_stats.h"

#include <map>
#include <string>

namespace docgraph {
namespace {

nlohmann::json histogram(const std::map<std::size_t, std::size_t>& counts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [length, count] : counts) out.push_back({{"count", count}, {"length", length}});
  return out;
}

}  // namespace

nlohmann::json corpus_stats(std::span<const RawDocument> docs) {
  std::map<std::string, std::size_t> per_class;
  std::map<std::string, std::size_t> per_source;
  std::map<std::size_t, std::size_t> sentences_per_doc;
  std::map<std::size_t, std::size_t> tokens_per_sentence;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  for (const RawDocument& doc : docs) {
    ++per_class[doc.label];
    ++per_source[doc.source];
    const std::vector<std::string> split = split_sentences(doc.text);
    ++sentences_per_doc[split.size()];
    sentences += split.size();
    for (const std::string& s : split) {
      const std::size_t n = tokenize(s).size();
      ++tokens_per_sentence[n];
      tokens += n;
    }
  }
  return {
      {"documents", docs.size()},
      {"sentences", sentences},
      {"tokens", tokens},
      {"per_class", per_class},
      {"per_source", per_source},
      {"sentences_per_document", histogram(sentences_per_doc)},
      {"tokens_per_sentence", histogram(tokens_per_sentence)},
  };
}

}  // namespace docgraph
