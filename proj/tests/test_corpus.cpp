#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "chronograph/corpus.hpp"
#include "chronograph/errors.hpp"
#include "chronograph/timex.hpp"

using namespace chronograph;
using corpus::Document;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    path = "corpus_test_tmp.jsonl";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

Document simple_doc() {
  Document d;
  d.id = "d1";
  d.title = "Jane Doe";
  d.paragraphs = {{"Early life", "He enrolled at Stanford. In 1956, he left."}};
  d.question = "Which school did Jane Doe attend in 1956?";
  d.answers = {"Stanford"};
  return d;
}

}  // namespace

TEST_CASE("load_jsonl round-trips a hand-written record") {
  TempFile f(
      R"({"id":"d1","title":"T","paragraphs":[{"heading":"H","text":"Alpha beta."}],)"
      R"("question":"Q?","answers":["A"],"extra_field":42})"
      "\n");
  const auto docs = corpus::load_jsonl(f.path);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "d1");
  CHECK(docs[0].title == "T");
  REQUIRE(docs[0].paragraphs.size() == 1);
  CHECK(docs[0].paragraphs[0].heading == "H");
  CHECK(docs[0].paragraphs[0].text == "Alpha beta.");
  CHECK(docs[0].question == "Q?");
  CHECK(docs[0].answers == std::vector<std::string>{"A"});
}

TEST_CASE("load_jsonl edge cases") {
  {
    TempFile f("");
    CHECK(corpus::load_jsonl(f.path).empty());
  }
  {
    TempFile f(
        R"({"id":"d1","title":"T","paragraphs":[],"question":"Q?","answers":["A"]})"
        "\n");
    CHECK_THROWS_WITH_AS(corpus::load_jsonl(f.path), "empty paragraphs at line 1",
                         ValidationError);
  }
  {
    TempFile f("{not json\n");
    CHECK_THROWS_AS(corpus::load_jsonl(f.path), ValidationError);
  }
  {
    TempFile f(R"({"id":"d1","title":"T","paragraphs":[{"heading":"H","text":"X."}],)"
               R"("answers":["A"]})"
               "\n");
    try {
      corpus::load_jsonl(f.path);
      FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("question") != std::string::npos);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
}

TEST_CASE("segment splits on terminators followed by capitals or digits") {
  const auto chunks = corpus::segment(simple_doc());
  REQUIRE(chunks.size() == 1);
  REQUIRE(chunks[0].sentences.size() == 2);
  CHECK(chunks[0].sentences[0].text == "He enrolled at Stanford.");
  CHECK(chunks[0].sentences[0].begin == 0);
  CHECK(chunks[0].sentences[0].end == 24);
  CHECK(chunks[0].sentences[1].text == "In 1956, he left.");
  CHECK(chunks[0].sentences[1].begin == 25);
  CHECK(chunks[0].sentences[1].end == 42);
}

TEST_CASE("segment chunk count and fallback rule") {
  Document d = simple_doc();
  d.paragraphs = {{"A", "One sentence only"},
                  {"B", "Dr. Smith stayed"},
                  {"C", "First! 2nd. and no split on lowercase. Third"}};
  const auto chunks = corpus::segment(d);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].index == 0);
  CHECK(chunks[1].index == 1);
  CHECK(chunks[2].index == 2);
  // No terminator -> whole text.
  CHECK(chunks[0].sentences.size() == 1);
  CHECK(chunks[0].sentences[0].text == "One sentence only");
  // Abbreviations are not special-cased: "Dr. Smith" splits.
  CHECK(chunks[1].sentences.size() == 2);
  // Lowercase after the period does not split.
  REQUIRE(chunks[2].sentences.size() == 3);
  CHECK(chunks[2].sentences[1].text == "2nd. and no split on lowercase.");
}

TEST_CASE("segmentation partition reproduces the paragraph text") {
  Document d = simple_doc();
  d.paragraphs.push_back({"More", "  Leading spaces. Trailing too.  "});
  for (const auto& chunk : corpus::segment(d)) {
    const std::string& text = d.paragraphs[chunk.index].text;
    int cursor = 0;
    for (const auto& s : chunk.sentences) {
      CHECK(text.substr(s.begin, s.end - s.begin) == s.text);
      // Gaps between sentences are whitespace only.
      for (int i = cursor; i < s.begin; ++i)
        CHECK(std::isspace(static_cast<unsigned char>(text[i])));
      cursor = s.end;
    }
    for (std::size_t i = cursor; i < text.size(); ++i)
      CHECK(std::isspace(static_cast<unsigned char>(text[i])));
  }
}

TEST_CASE("tokenize splits whitespace and peels punctuation") {
  auto tokens = corpus::tokenize("In 1956, she earned");
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0].text == "In");
  CHECK(tokens[1].text == "1956");
  CHECK(tokens[2].text == ",");
  CHECK(tokens[3].text == "she");
  CHECK(tokens[4].text == "earned");

  CHECK(corpus::tokenize("").empty());

  tokens = corpus::tokenize("Stanford.");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].text == "Stanford");
  CHECK(tokens[1].text == ".");

  // Offsets reconstruct the source (losslessness).
  const std::string text = "a (1966-1968) ...line";
  for (const auto& t : corpus::tokenize(text))
    CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
}

TEST_CASE("gen_synthetic is deterministic") {
  corpus::SynthConfig config;
  const auto a = corpus::gen_synthetic(11, 8, config);
  const auto b = corpus::gen_synthetic(11, 8, config);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(corpus::document_to_json(a[i]) == corpus::document_to_json(b[i]));
}

TEST_CASE("gen_synthetic rejects an empty category set") {
  corpus::SynthConfig config;
  config.categories.clear();
  CHECK_THROWS_AS(corpus::gen_synthetic(1, 1, config), ValidationError);
  CHECK_THROWS_AS(corpus::gen_synthetic(1, 0, corpus::SynthConfig{}), ValidationError);
}

TEST_CASE("between-explicit questions quote years verbatim from the document") {
  corpus::SynthConfig config;
  config.categories = {corpus::QuestionCategory::BetweenExplicit};
  config.unanswerable_rate = 0.0;
  for (const auto& doc : corpus::gen_synthetic(3, 40, config)) {
    const auto ms = timex::extract_timex(doc.question);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].category == timex::TimeXCategory::Between);
    CHECK(doc.question.find("between ") != std::string::npos);
    // Both years appear verbatim in the document text.
    const int y1 = static_cast<int>(ms[0].interval.start);
    const int y2 = static_cast<int>(ms[0].interval.end);
    std::string text;
    for (const auto& p : doc.paragraphs) text += p.text + "\n";
    CHECK(text.find(std::to_string(y1)) != std::string::npos);
    CHECK(text.find(std::to_string(y2)) != std::string::npos);
  }
}

TEST_CASE("implicit questions never quote their time expression") {
  corpus::SynthConfig config;
  config.categories = {
      corpus::QuestionCategory::InImplicit, corpus::QuestionCategory::BetweenImplicit,
      corpus::QuestionCategory::BeforeImplicit, corpus::QuestionCategory::AfterImplicit};
  for (const auto& doc : corpus::gen_synthetic(4, 60, config)) {
    const auto ms = timex::extract_timex(doc.question);
    REQUIRE(!ms.empty());
    std::string text;
    for (const auto& p : doc.paragraphs) text += p.text + "\n";
    CHECK(text.find(ms[0].surface) == std::string::npos);
  }
}

TEST_CASE("generator answerability: exactly one satisfying fact, or none") {
  corpus::SynthConfig config;
  int unanswerable = 0;
  const auto docs = corpus::gen_synthetic(21, 120, config);
  for (const auto& doc : docs) {
    const auto chunks = corpus::segment(doc);
    const auto qms = timex::extract_timex(doc.question);
    REQUIRE(qms.size() == 1);

    // Collect fact intervals: one per sentence with a mention.
    std::vector<timex::TimeInterval> facts;
    for (const auto& chunk : chunks)
      for (const auto& s : chunk.sentences) {
        const auto ms = timex::extract_timex(s.text);
        if (!ms.empty()) facts.push_back(ms[0].interval);
      }
    int satisfied = 0;
    for (const auto& f : facts)
      satisfied += timex::satisfies(qms[0].category, qms[0].interval, f);

    const bool is_unanswerable = doc.answers[0] == corpus::kUnanswerable;
    if (is_unanswerable) {
      CHECK(satisfied == 0);
      ++unanswerable;
    } else {
      CHECK(satisfied == 1);
    }
  }
  // Roughly the configured 10% unanswerable share.
  CHECK(unanswerable > 2);
  CHECK(unanswerable < 30);
}
