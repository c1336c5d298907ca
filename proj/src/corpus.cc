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

#include "docgraph/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "json.hpp"

#include "docgraph/error.h"
#include "docgraph/random.h"

namespace docgraph {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
// ASCII punctuation only; UTF-8 continuation bytes are word characters.
bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool is_opener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }

constexpr std::array<std::string_view, 13> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "st", "vs", "etc", "e.g", "i.e", "u.s", "inc", "jr", "sr"};

// Word ending just before position `dot`, lowercased, leading punctuation
// removed.
std::string word_before(const std::string& s, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && s[begin - 1] != ' ') --begin;
  while (begin < dot && !is_alnum(s[begin])) ++begin;
  return lowercase(std::string_view(s).substr(begin, dot - begin));
}

bool starts_sentence(const std::string& s, std::size_t pos) {
  if (pos >= s.size()) return false;
  if (is_upper(s[pos]) || is_digit(s[pos])) return true;
  return is_opener(s[pos]) && pos + 1 < s.size() && (is_upper(s[pos + 1]) || is_digit(s[pos + 1]));
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

TokenIds Document::flattened() const {
  TokenIds out;
  for (const TokenIds& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

ClassSet::ClassSet(std::vector<std::string> names) {
  if (names.size() < 2) throw ConfigError("a class set needs at least two classes");
  for (std::string& n : names) {
    std::string normalized = lowercase(trim(n));
    if (normalized.empty()) throw ConfigError("empty class name");
    if (std::find(names_.begin(), names_.end(), normalized) != names_.end()) {
      throw ConfigError("duplicate class name: " + normalized);
    }
    names_.push_back(std::move(normalized));
  }
}

ClassSet ClassSet::two_way() { return ClassSet({"trusted", "satire"}); }

ClassSet ClassSet::four_way() { return ClassSet({"trusted", "satire", "hoax", "propaganda"}); }

std::optional<std::size_t> ClassSet::find(std::string_view label) const {
  const std::string key = lowercase(trim(label));
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == key) return i;
  }
  return std::nullopt;
}

Vocabulary::Vocabulary() {
  tokens_ = {std::string(kPadToken), std::string(kUnkToken)};
  ids_.emplace(kPadToken, kPad);
  ids_.emplace(kUnkToken, kUnk);
}

Vocabulary Vocabulary::from_tokens(std::span<const std::string> tokens, std::size_t min_frequency) {
  Vocabulary vocab;
  vocab.min_frequency_ = min_frequency;
  for (const std::string& t : tokens) {
    if (t.empty()) throw ConfigError("empty vocabulary token");
    const auto next = static_cast<std::int32_t>(vocab.tokens_.size());
    if (!vocab.ids_.emplace(t, next).second) throw ConfigError("duplicate vocabulary token: " + t);
    vocab.tokens_.push_back(t);
  }
  return vocab;
}

std::int32_t Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw ConfigError("token id " + std::to_string(id) + " outside vocabulary of size " +
                      std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "tsv") return CorpusFormat::kTsv;
  throw ConfigError("unknown corpus format: " + std::string(name));
}

CorpusFormat infer_corpus_format(const std::filesystem::path& path) {
  const std::string ext = lowercase(path.extension().string());
  return ext == ".jsonl" || ext == ".json" ? CorpusFormat::kJsonl : CorpusFormat::kTsv;
}

std::vector<RawDocument> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                     const ClassSet* required_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read corpus file " + path.string());

  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    RawDocument doc;
    const std::string auto_id = "row-" + std::to_string(docs.size());
    if (format == CorpusFormat::kTsv) {
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos) malformed(path, line_no, "expected label<TAB>text");
      doc.id = auto_id;
      doc.label = std::string(trim(std::string_view(line).substr(0, tab)));
      doc.text = line.substr(tab + 1);
    } else {
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        malformed(path, line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!record.is_object()) malformed(path, line_no, "record is not a JSON object");
      auto string_field = [&](const char* key, bool required) -> std::string {
        auto it = record.find(key);
        if (it == record.end() || it->is_null()) {
          if (required) malformed(path, line_no, std::string("missing field \"") + key + "\"");
          return {};
        }
        if (!it->is_string()) malformed(path, line_no, std::string("field \"") + key + "\" is not a string");
        return it->get<std::string>();
      };
      doc.id = string_field("id", false);
      if (doc.id.empty()) doc.id = auto_id;
      doc.label = std::string(trim(string_field("label", true)));
      doc.source = string_field("source", false);
      doc.text = string_field("text", true);
    }
    if (doc.label.empty()) malformed(path, line_no, "empty label");
    if (trim(doc.text).empty()) malformed(path, line_no, "empty text");
    if (required_labels != nullptr && !required_labels->contains(doc.label)) {
      malformed(path, line_no, "unknown label \"" + doc.label + "\" for document " + doc.id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<RawDocument> filter_by_class(std::vector<RawDocument> docs, const ClassSet& classes) {
  std::erase_if(docs, [&](const RawDocument& d) { return !classes.contains(d.label); });
  return docs;
}

std::span<const std::string_view> sentence_abbreviations() { return kAbbreviations; }

std::vector<std::string> split_sentences(std::string_view text) {
  const std::string s = normalize_whitespace(text);
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_terminator(s[i])) continue;
    std::size_t end = i + 1;
    while (end < s.size() && is_terminator(s[end])) ++end;
    while (end < s.size() && is_closer(s[end])) ++end;
    if (end >= s.size() || s[end] != ' ' || !starts_sentence(s, end + 1)) continue;
    const bool single_period = s[i] == '.' && (end == i + 1 || !is_terminator(s[i + 1]));
    if (single_period) {
      const std::string word = word_before(s, i);
      if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end()) {
        continue;
      }
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
    i = end;
  }
  if (start < s.size()) out.push_back(s.substr(start));
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    if (j == i) break;
    std::string_view word = sentence.substr(i, j - i);
    i = j;

    std::size_t lead = 0;
    while (lead < word.size() && is_punct(word[lead])) ++lead;
    std::size_t trail = word.size();
    while (trail > lead && is_punct(word[trail - 1])) --trail;

    for (std::size_t k = 0; k < lead; ++k) out.emplace_back(1, word[k]);
    if (trail > lead) out.push_back(lowercase(word.substr(lead, trail - lead)));
    for (std::size_t k = std::max(trail, lead); k < word.size(); ++k) out.emplace_back(1, word[k]);
  }
  return out;
}

Vocabulary build_vocab(std::span<const RawDocument> docs, std::size_t min_frequency) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const RawDocument& doc : docs) {
    for (const std::string& sentence : split_sentences(doc.text)) {
      for (std::string& token : tokenize(sentence)) ++counts[std::move(token)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [token, count] : counts) {
    if (count < std::max<std::size_t>(min_frequency, 1)) continue;
    if (token == Vocabulary::kPadToken || token == Vocabulary::kUnkToken) continue;
    ranked.emplace_back(token, count);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& entry : ranked) tokens.push_back(std::move(entry.first));
  return Vocabulary::from_tokens(tokens, min_frequency);
}

Document encode_document(const RawDocument& raw, const Vocabulary& vocab, const ClassSet& classes,
                         const EncodeOptions& options) {
  if (options.max_sentences == 0 || options.max_tokens == 0) {
    throw ConfigError("max_sentences and max_tokens must be at least 1");
  }
  const std::optional<std::size_t> label = classes.find(raw.label);
  if (!label) {
    throw ConfigError("document " + raw.id + " has label \"" + raw.label +
                      "\" outside the class set");
  }
  Document doc;
  doc.id = raw.id;
  doc.label = *label;
  for (const std::string& sentence : split_sentences(raw.text)) {
    if (doc.sentences.size() == options.max_sentences) break;
    TokenIds ids;
    for (const std::string& token : tokenize(sentence)) {
      if (ids.size() == options.max_tokens) break;
      ids.push_back(vocab.id(token));
    }
    if (!ids.empty()) doc.sentences.push_back(std::move(ids));
  }
  return doc;
}

EncodedCorpus encode_corpus(std::span<const RawDocument> docs, const Vocabulary& vocab,
                            const ClassSet& classes, const EncodeOptions& options) {
  EncodedCorpus out;
  out.documents.reserve(docs.size());
  for (const RawDocument& raw : docs) {
    Document doc = encode_document(raw, vocab, classes, options);
    if (doc.sentences.empty()) {
      ++out.dropped;
      continue;
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const std::size_t> labels, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");

  std::map<std::size_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  std::vector<bool> to_train(labels.size(), false);
  for (auto& [label, members] : by_class) {
    if (members.size() < 2) {
      throw ConfigError("class " + std::to_string(label) + " has fewer than 2 documents; cannot split");
    }
    rng.shuffle(std::span<std::size_t>(members));
    const double wanted = ratio * static_cast<double>(members.size());
    auto n_train = static_cast<std::size_t>(std::llround(wanted));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
    for (std::size_t k = 0; k < n_train; ++k) to_train[members[k]] = true;
  }

  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) (to_train[i] ? out.first : out.second).push_back(i);
  return out;
}

std::pair<std::vector<Document>, std::vector<Document>> split_train_dev(
    std::span<const Document> docs, double ratio, std::uint64_t seed) {
  std::vector<std::size_t> labels;
  labels.reserve(docs.size());
  for (const Document& d : docs) labels.push_back(d.label);
  const auto [train_idx, dev_idx] = stratified_split(labels, ratio, seed);
  std::pair<std::vector<Document>, std::vector<Document>> out;
  for (std::size_t i : train_idx) out.first.push_back(docs[i]);
  for (std::size_t i : dev_idx) out.second.push_back(docs[i]);
  return out;
}

}  // namespace docgraph
