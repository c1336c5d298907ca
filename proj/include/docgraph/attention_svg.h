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

#ifndef DOCGRAPH_ATTENTION_SVG_H_
#define DOCGRAPH_ATTENTION_SVG_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docgraph/corpus.h"
#include "docgraph/graph.h"
#include "docgraph/model.h"

namespace docgraph {

// Attention of one document, one n x n matrix per head.
struct AttentionMap {
  std::string doc_id;
  std::string variant;
  std::vector<Tensor> heads;
  std::vector<std::string> sentences;  // n source sentences, for the legend
};

// Runs the model on `raw` (encoded with `vocab`) and returns the final
// attention layer. Throws ConfigError for variants without attention and for
// single-sentence documents under GAT, which have no neighbors to attend to.
AttentionMap attention_for_document(const Model& model, const Vocabulary& vocab,
                                    const RawDocument& raw, const EdgeWeightSet* weights);

// At most `max_chars` characters, never splitting a UTF-8 sequence.
std::string sentence_preview(std::string_view sentence, std::size_t max_chars = 40);

// Heads side by side as n x n grids. Cell fill goes linearly from white at 0
// to full blue at the head's largest weight; each cell carries data-head,
// data-row, data-col and data-alpha (round-trip precision) attributes.
std::string render_attention_svg(const AttentionMap& map);

}  // namespace docgraph

#endif  // DOCGRAPH_ATTENTION_SVG_H_
