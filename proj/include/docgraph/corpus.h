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

#ifndef DOCGRAPH_CORPUS_H_
#define DOCGRAPH_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace docgraph {

struct RawDocument {
  std::string id;
  std::string label;
  std::string source;
  std::string text;

  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

using TokenIds = std::vector<std::int32_t>;

// A sentence-segmented, token-encoded article. Sentence order follows the
// source text.
struct Document {
  std::string id;
  std::size_t label = 0;
  std::vector<TokenIds> sentences;

  std::size_t n_sentences() const { return sentences.size(); }
  // All sentences concatenated in order, no separators.
  TokenIds flattened() const;

  friend bool operator==(const Document&, const Document&) = default;
};

// Ordered, unique class names. Labels are matched case-insensitively and
// stored lowercase.
class ClassSet {
 public:
  ClassSet() = default;
  explicit ClassSet(std::vector<std::string> names);

  static ClassSet two_way();   // trusted, satire
  static ClassSet four_way();  // trusted, satire, hoax, propaganda

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::optional<std::size_t> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  friend bool operator==(const ClassSet&, const ClassSet&) = default;

 private:
  std::vector<std::string> names_;
};

class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  // Only the reserved entries.
  Vocabulary();
  // Reserved entries followed by `tokens`; throws on duplicates or on tokens
  // that collide with the reserved ones.
  static Vocabulary from_tokens(std::span<const std::string> tokens, std::size_t min_frequency);

  std::size_t size() const { return tokens_.size(); }
  std::size_t min_frequency() const { return min_frequency_; }
  // Unknown tokens map to kUnk.
  std::int32_t id(std::string_view token) const;
  const std::string& token(std::int32_t id) const;
  // Every entry in id order, reserved ones included.
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.min_frequency_ == b.min_frequency_;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::int32_t, std::less<>> ids_;
  std::size_t min_frequency_ = 1;
};

enum class CorpusFormat { kJsonl, kTsv };

// "jsonl"/"tsv"; throws ConfigError otherwise.
CorpusFormat parse_corpus_format(std::string_view name);
// .jsonl and .json map to JSONL, anything else to TSV.
CorpusFormat infer_corpus_format(const std::filesystem::path& path);

// Reads one record per non-blank line. When `required_labels` is given, a
// label outside it is an error. TSV rows get ids "row-<k>" with k the
// zero-based record index.
std::vector<RawDocument> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                     const ClassSet* required_labels = nullptr);

// Drops documents whose label is outside `classes`.
std::vector<RawDocument> filter_by_class(std::vector<RawDocument> docs, const ClassSet& classes);

// Rule-based sentence segmentation over whitespace-normalized text.
std::vector<std::string> split_sentences(std::string_view text);
std::vector<std::string> tokenize(std::string_view sentence);

// Abbreviations that never end a sentence, lowercase and without the final
// period.
std::span<const std::string_view> sentence_abbreviations();

// Tokens ranked by descending frequency, ties broken lexicographically.
Vocabulary build_vocab(std::span<const RawDocument> docs, std::size_t min_frequency);

struct EncodeOptions {
  std::size_t max_sentences = 64;
  std::size_t max_tokens = 64;
};

struct EncodedCorpus {
  std::vector<Document> documents;
  std::size_t dropped = 0;  // documents with nothing left after encoding
};

EncodedCorpus encode_corpus(std::span<const RawDocument> docs, const Vocabulary& vocab,
                            const ClassSet& classes, const EncodeOptions& options);
Document encode_document(const RawDocument& doc, const Vocabulary& vocab, const ClassSet& classes,
                         const EncodeOptions& options);

// Stratified, seeded split of positions 0..labels.size()-1. Within each
// class the positions are shuffled and round(ratio * n) (clamped to
// [1, n - 1]) go to train. Both outputs are ascending. Classes with one
// member are an error; absent classes are ignored.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const std::size_t> labels, double ratio, std::uint64_t seed);

// stratified_split over document labels. Both outputs keep the input order.
std::pair<std::vector<Document>, std::vector<Document>> split_train_dev(
    std::span<const Document> docs, double ratio, std::uint64_t seed);

}  // namespace docgraph

#endif  // DOCGRAPH_CORPUS_H_
