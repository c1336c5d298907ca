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

#include "docgraph/attention_svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "docgraph/error.h"

namespace docgraph {
namespace {

constexpr int kCell = 28;
constexpr int kMargin = 44;
constexpr int kHeadGap = 40;
constexpr int kLegendLine = 18;

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// White (t = 0) to dark blue (t = 1).
std::string fill_for(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto channel = [t](int lo) { return static_cast<int>(std::lround(255.0 + (lo - 255.0) * t)); };
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", channel(8), channel(48), channel(107));
  return buf;
}

}  // namespace

AttentionMap attention_for_document(const Model& model, const Vocabulary& vocab,
                                    const RawDocument& raw, const EdgeWeightSet* weights) {
  const ModelConfig& config = model.config();
  if (!produces_attention(config.variant)) {
    throw ConfigError("variant " + std::string(variant_name(config.variant)) +
                      " has no attention to export");
  }
  const Document doc = encode_document(raw, vocab, config.classes(), config.encode_options());
  if (doc.sentences.empty()) throw ConfigError("document " + raw.id + " has no encodable sentences");
  Tape tape;
  const ForwardResult result = model.forward(tape, doc, weights);
  if (result.attention.empty()) {
    throw ConfigError("document " + raw.id + " has a single sentence; " +
                      std::string(variant_name(config.variant)) + " computes no attention for it");
  }
  AttentionMap map;
  map.doc_id = raw.id;
  map.variant = std::string(variant_name(config.variant));
  for (const Var& head : result.attention) map.heads.push_back(head.value());
  // Same segmentation as encoding; sentences that tokenize to nothing cannot
  // occur because segments are non-empty.
  std::vector<std::string> sentences = split_sentences(raw.text);
  sentences.resize(std::min(sentences.size(), doc.n_sentences()));
  map.sentences = std::move(sentences);
  return map;
}

std::string sentence_preview(std::string_view sentence, std::size_t max_chars) {
  std::size_t chars = 0;
  std::size_t i = 0;
  while (i < sentence.size() && chars < max_chars) {
    const auto lead = static_cast<unsigned char>(sentence[i]);
    std::size_t width = 1;
    if (lead >= 0xf0) width = 4;
    else if (lead >= 0xe0) width = 3;
    else if (lead >= 0xc0) width = 2;
    i = std::min(sentence.size(), i + width);
    ++chars;
  }
  return std::string(sentence.substr(0, i));
}

std::string render_attention_svg(const AttentionMap& map) {
  if (map.heads.empty()) throw ConfigError("attention map has no heads");
  const auto n = static_cast<int>(map.heads.front().rows());
  const int grid = n * kCell;
  const int heads = static_cast<int>(map.heads.size());
  const int width = kMargin + heads * grid + (heads - 1) * kHeadGap + kMargin;
  const int legend_top = kMargin + grid + 30;
  const int height = legend_top + static_cast<int>(map.sentences.size()) * kLegendLine + 20;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" data-doc-id=\"" + xml_escape(map.doc_id) +
         "\" data-variant=\"" + xml_escape(map.variant) + "\" data-n=\"" + std::to_string(n) +
         "\" data-heads=\"" + std::to_string(heads) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>Attention for " + xml_escape(map.doc_id) + "</title>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int h = 0; h < heads; ++h) {
    const Tensor& a = map.heads[static_cast<std::size_t>(h)];
    if (static_cast<int>(a.rows()) != n || static_cast<int>(a.cols()) != n) {
      throw ShapeError("attention heads differ in size");
    }
    double peak = 0.0;
    for (double v : a.values()) peak = std::max(peak, v);
    const int left = kMargin + h * (grid + kHeadGap);
    svg += "<g class=\"head\" data-head=\"" + std::to_string(h) + "\">\n";
    if (heads > 1) {
      svg += "<text x=\"" + std::to_string(left) + "\" y=\"14\">head " + std::to_string(h) + "</text>\n";
    }
    for (int i = 0; i < n; ++i) {
      const int y = kMargin + i * kCell;
      svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + std::to_string(y + kCell / 2 + 4) +
             "\" text-anchor=\"end\">" + std::to_string(i) + "</text>\n";
      svg += "<text x=\"" + std::to_string(left + i * kCell + kCell / 2) + "\" y=\"" +
             std::to_string(kMargin - 6) + "\" text-anchor=\"middle\">" + std::to_string(i) + "</text>\n";
      for (int j = 0; j < n; ++j) {
        const double alpha = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        svg += "<rect class=\"cell\" x=\"" + std::to_string(left + j * kCell) + "\" y=\"" +
               std::to_string(y) + "\" width=\"" + std::to_string(kCell) + "\" height=\"" +
               std::to_string(kCell) + "\" fill=\"" + fill_for(peak > 0.0 ? alpha / peak : 0.0) +
               "\" stroke=\"#cccccc\" data-head=\"" + std::to_string(h) + "\" data-row=\"" +
               std::to_string(i) + "\" data-col=\"" + std::to_string(j) + "\" data-alpha=\"" +
               format_double(alpha) + "\"/>\n";
      }
    }
    svg += "</g>\n";
  }

  svg += "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < map.sentences.size(); ++i) {
    svg += "<text x=\"" + std::to_string(kMargin) + "\" y=\"" +
           std::to_string(legend_top + static_cast<int>(i) * kLegendLine) + "\" data-sentence=\"" +
           std::to_string(i) + "\">" + std::to_string(i) + ": " +
           xml_escape(sentence_preview(map.sentences[i])) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace docgraph
