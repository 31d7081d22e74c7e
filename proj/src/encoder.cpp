#include "chronograph/encoder.hpp"

#include <cmath>

#include "chronograph/errors.hpp"
#include "chronograph/rng.hpp"

namespace chronograph::encoder {

using num::Matrix;

DocLayout build_layout(const corpus::Document& doc, const std::vector<corpus::Chunk>& chunks) {
  DocLayout layout;
  for (const auto& t : corpus::tokenize(doc.question)) layout.question_tokens.push_back(t.text);
  std::vector<std::string> title_tokens;
  for (const auto& t : corpus::tokenize(doc.title)) title_tokens.push_back(t.text);

  layout.sentences.resize(chunks.size());
  for (const auto& chunk : chunks) {
    std::vector<std::string> tokens = {"question", ":"};
    layout.question_span = {2, 2 + static_cast<int>(layout.question_tokens.size())};
    for (const auto& t : layout.question_tokens) tokens.push_back(t);
    tokens.push_back("title");
    tokens.push_back(":");
    for (const auto& t : title_tokens) tokens.push_back(t);
    tokens.push_back("paragraph");
    tokens.push_back(":");
    for (const auto& sentence : chunk.sentences) {
      SentenceTokens st;
      st.tokens = corpus::tokenize(sentence.text);
      st.rows.begin = static_cast<int>(tokens.size());
      for (const auto& t : st.tokens) tokens.push_back(t.text);
      st.rows.end = static_cast<int>(tokens.size());
      layout.sentences[chunk.index].push_back(std::move(st));
    }
    layout.row_offset.push_back(layout.total_rows);
    layout.total_rows += static_cast<int>(tokens.size());
    layout.para_tokens.push_back(std::move(tokens));
  }
  return layout;
}

TokenSpan sentence_rows(const DocLayout& layout, int chunk, int sentence) {
  if (chunk < 0 || chunk >= static_cast<int>(layout.sentences.size()) || sentence < 0 ||
      sentence >= static_cast<int>(layout.sentences[chunk].size()))
    throw ValidationError("sentence reference out of range");
  return layout.sentences[chunk][sentence].rows;
}

TokenSpan mention_rows(const DocLayout& layout, const timex::TimeXMention& mention) {
  const SentenceTokens& st = layout.sentences.at(mention.chunk).at(mention.sentence);
  int first = -1, last = -1;
  for (std::size_t i = 0; i < st.tokens.size(); ++i) {
    const auto& t = st.tokens[i];
    if (t.begin < mention.end && t.end > mention.begin) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i);
    }
  }
  if (first < 0) throw ValidationError("mention span maps to no tokens");
  return {st.rows.begin + first, st.rows.begin + last + 1};
}

Matrix token_vector(const std::string& text, int hidden, std::uint64_t seed) {
  Matrix v(1, hidden);
  std::uint64_t state = mix64(fnv1a64(text), seed);
  const double a = std::sqrt(3.0 / hidden);
  for (int i = 0; i < hidden; ++i) {
    const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    v(0, i) = (2.0 * u - 1.0) * a;
  }
  return v;
}

namespace {

Matrix encode_sequence(const std::vector<std::string>& tokens, int hidden, std::uint64_t seed) {
  const int m = static_cast<int>(tokens.size());
  Matrix raw(m, hidden);
  for (int i = 0; i < m; ++i) raw.row(i) = token_vector(tokens[i], hidden, seed);
  Matrix mixed(m, hidden);
  for (int i = 0; i < m; ++i) {
    const int lo = std::max(0, i - 1);
    const int hi = std::min(m - 1, i + 1);
    mixed.row(i) = raw.middleRows(lo, hi - lo + 1).colwise().mean();
  }
  return mixed;
}

}  // namespace

TextRep encode(const DocLayout& layout, int hidden, std::uint64_t seed) {
  if (hidden < 4 || hidden % 2 != 0)
    throw ValidationError("hidden size must be even and at least 4");
  TextRep rep;
  for (const auto& tokens : layout.para_tokens)
    rep.paragraphs.push_back(encode_sequence(tokens, hidden, seed));
  rep.question = encode_sequence(layout.question_tokens, hidden, seed);
  return rep;
}

TextRep encode_reference(const corpus::Document& doc, int hidden, std::uint64_t seed) {
  return encode(build_layout(doc, corpus::segment(doc)), hidden, seed);
}

}  // namespace chronograph::encoder
