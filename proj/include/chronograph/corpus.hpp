#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chronograph::corpus {

inline constexpr const char* kUnanswerable = "unanswerable";

struct Paragraph {
  std::string heading;
  std::string text;
};

struct Document {
  std::string id;
  std::string title;
  std::vector<Paragraph> paragraphs;
  std::string question;
  std::vector<std::string> answers;
};

// One object per line: {"id", "title", "paragraphs": [{"heading","text"}],
// "question", "answers"}. Unknown fields are ignored; violations report the
// offending line and field.
std::vector<Document> load_jsonl(const std::string& path);
void save_jsonl(const std::vector<Document>& docs, const std::string& path);
Document document_from_json(const std::string& line);
std::string document_to_json(const Document& doc);

struct Sentence {
  std::string text;
  int begin = 0;  // [begin, end) char span into the paragraph text
  int end = 0;
};

struct Chunk {
  int index = 0;
  std::string heading;
  std::vector<Sentence> sentences;
};

// One chunk per paragraph entry. Sentences split on ./!/? followed by
// whitespace and an uppercase letter or digit; no terminator means the whole
// paragraph is a single sentence.
std::vector<Chunk> segment(const Document& doc);

struct Token {
  std::string text;
  int begin = 0;  // [begin, end) char span into the tokenized string
  int end = 0;
};

// Whitespace split, then leading/trailing punctuation peeled off as separate
// tokens. Offsets make the split lossless.
std::vector<Token> tokenize(const std::string& text);

enum class QuestionCategory {
  InExplicit,
  BetweenExplicit,
  InImplicit,
  BetweenImplicit,
  BeforeImplicit,
  AfterImplicit,
};

const char* to_string(QuestionCategory c);
QuestionCategory question_category_from_string(const std::string& name);

struct SynthConfig {
  std::vector<QuestionCategory> categories = {
      QuestionCategory::InExplicit,     QuestionCategory::BetweenExplicit,
      QuestionCategory::InImplicit,     QuestionCategory::BetweenImplicit,
      QuestionCategory::BeforeImplicit, QuestionCategory::AfterImplicit,
  };
  double unanswerable_rate = 0.10;
  int min_chunks = 2;
  int max_chunks = 5;
  int min_facts_per_chunk = 2;
  int max_facts_per_chunk = 4;
  // Chance that a chunk revisits an earlier era instead of continuing the
  // timeline, which is what produces After and cross-chunk Overlap pairs.
  double flashback_rate = 0.45;
  // Share of in/between-implicit questions that use an interior year with no
  // lexical anchor in the document (the hardest flavor).
  double interior_year_rate = 0.2;
};

// Deterministic biography generator; a pure function of (seed, n_docs, config).
std::vector<Document> gen_synthetic(std::uint64_t seed, int n_docs, const SynthConfig& config);

}  // namespace chronograph::corpus
