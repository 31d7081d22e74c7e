#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chronograph/corpus.hpp"
#include "chronograph/tensor.hpp"
#include "chronograph/timex.hpp"

namespace chronograph::encoder {

struct TokenSpan {
  int begin = 0;
  int end = 0;  // [begin, end) token rows
  int length() const { return end - begin; }
};

struct SentenceTokens {
  std::vector<corpus::Token> tokens;  // char offsets within the sentence text
  TokenSpan rows;                     // rows within the paragraph matrix
};

// Token bookkeeping for one document under the "question: title: paragraph:"
// prefixing scheme. Every paragraph carries the same prefix, so the question
// span is valid in each paragraph's row space.
struct DocLayout {
  std::vector<std::vector<std::string>> para_tokens;   // per paragraph, prefixed
  std::vector<std::vector<SentenceTokens>> sentences;  // [chunk][sentence]
  std::vector<std::string> question_tokens;
  TokenSpan question_span;      // question tokens inside any paragraph
  std::vector<int> row_offset;  // paragraph start row in the stacked text rep
  int total_rows = 0;
};

DocLayout build_layout(const corpus::Document& doc, const std::vector<corpus::Chunk>& chunks);

// Rows of a sentence / mention within its paragraph's matrix.
TokenSpan sentence_rows(const DocLayout& layout, int chunk, int sentence);
TokenSpan mention_rows(const DocLayout& layout, const timex::TimeXMention& mention);

struct TextRep {
  std::vector<num::Matrix> paragraphs;  // m_i x h each
  num::Matrix question;                 // q x h
};

// Deterministic hash-keyed token vectors averaged with their +-1 neighbors.
TextRep encode(const DocLayout& layout, int hidden, std::uint64_t seed);

// Convenience wrapper: segment + layout + encode.
TextRep encode_reference(const corpus::Document& doc, int hidden, std::uint64_t seed);

// The raw (pre-mixing) vector of one token; exposed for tests.
num::Matrix token_vector(const std::string& text, int hidden, std::uint64_t seed);

}  // namespace chronograph::encoder
