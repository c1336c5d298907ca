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

#ifndef DOCGRAPH_CORPUS_STATS_H_
#define DOCGRAPH_CORPUS_STATS_H_

#include <span>

#include "json.hpp"

#include "docgraph/corpus.h"

namespace docgraph {

// Document counts per class and per source, plus histograms of sentences per
// document and tokens per sentence (uncapped). Histograms are arrays of
// {"length", "count"} in ascending length; documents without a source count
// under "".
nlohmann::json corpus_stats(std::span<const RawDocument> docs);

}  // namespace docgraph

#endif  // DOCGRAPH_CORPUS_STATS_H_
