#include "chronograph/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "chronograph/errors.hpp"
#include "json.hpp"

namespace chronograph::corpus {

namespace {

using json = nlohmann::ordered_json;

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

const json& require(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end())
    throw ValidationError("missing field \"" + std::string(field) + "\" " + where);
  return *it;
}

Document parse_document(const json& j, const std::string& where) {
  Document doc;
  doc.id = require(j, "id", where).get<std::string>();
  doc.title = require(j, "title", where).get<std::string>();
  const json& paras = require(j, "paragraphs", where);
  if (!paras.is_array() || paras.empty())
    throw ValidationError("empty paragraphs " + where);
  for (const auto& p : paras) {
    Paragraph para;
    para.heading = require(p, "heading", where).get<std::string>();
    para.text = require(p, "text", where).get<std::string>();
    if (blank(para.text)) throw ValidationError("empty paragraph text " + where);
    doc.paragraphs.push_back(std::move(para));
  }
  doc.question = require(j, "question", where).get<std::string>();
  const json& answers = require(j, "answers", where);
  if (!answers.is_array() || answers.empty())
    throw ValidationError("empty answers " + where);
  for (const auto& a : answers) doc.answers.push_back(a.get<std::string>());
  return doc;
}

}  // namespace

Document document_from_json(const std::string& line) {
  json j = json::parse(line);
  return parse_document(j, "");
}

std::string document_to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["paragraphs"] = json::array();
  for (const auto& p : doc.paragraphs)
    j["paragraphs"].push_back({{"heading", p.heading}, {"text", p.text}});
  j["question"] = doc.question;
  j["answers"] = doc.answers;
  return j.dump();
}

std::vector<Document> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<Document> docs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = "at line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("malformed JSON " + where + ": " + e.what());
    }
    docs.push_back(parse_document(j, where));
  }
  return docs;
}

void save_jsonl(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  for (const auto& d : docs) out << document_to_json(d) << "\n";
}

std::vector<Chunk> segment(const Document& doc) {
  std::vector<Chunk> chunks;
  chunks.reserve(doc.paragraphs.size());
  for (std::size_t pi = 0; pi < doc.paragraphs.size(); ++pi) {
    const std::string& text = doc.paragraphs[pi].text;
    Chunk chunk;
    chunk.index = static_cast<int>(pi);
    chunk.heading = doc.paragraphs[pi].heading;

    const int n = static_cast<int>(text.size());
    int start = 0;
    while (start < n && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
    for (int i = start; i < n; ++i) {
      const char c = text[i];
      if (c != '.' && c != '!' && c != '?') continue;
      int k = i + 1;
      if (k >= n || !std::isspace(static_cast<unsigned char>(text[k]))) continue;
      while (k < n && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k >= n) continue;
      const unsigned char next = static_cast<unsigned char>(text[k]);
      if (!std::isupper(next) && !std::isdigit(next)) continue;
      chunk.sentences.push_back({text.substr(start, i + 1 - start), start, i + 1});
      start = k;
      i = k - 1;
    }
    if (start < n) {
      int end = n;
      while (end > start && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
      if (end > start) chunk.sentences.push_back({text.substr(start, end - start), start, end});
    }
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  const int n = static_cast<int>(text.size());
  int i = 0;
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    int j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    // [i, j) is a whitespace-delimited piece; peel punctuation off both ends.
    int b = i, e = j;
    int lead = b;
    while (lead < e && std::ispunct(static_cast<unsigned char>(text[lead]))) ++lead;
    if (lead == e) {
      // All punctuation: each char is its own token.
      for (int k = b; k < e; ++k) out.push_back({text.substr(k, 1), k, k + 1});
      i = j;
      continue;
    }
    int trail = e;
    while (trail > lead && std::ispunct(static_cast<unsigned char>(text[trail - 1]))) --trail;
    for (int k = b; k < lead; ++k) out.push_back({text.substr(k, 1), k, k + 1});
    out.push_back({text.substr(lead, trail - lead), lead, trail});
    for (int k = trail; k < e; ++k) out.push_back({text.substr(k, 1), k, k + 1});
    i = j;
  }
  return out;
}

const char* to_string(QuestionCategory c) {
  switch (c) {
    case QuestionCategory::InExplicit: return "in-explicit";
    case QuestionCategory::BetweenExplicit: return "between-explicit";
    case QuestionCategory::InImplicit: return "in-implicit";
    case QuestionCategory::BetweenImplicit: return "between-implicit";
    case QuestionCategory::BeforeImplicit: return "before-implicit";
    case QuestionCategory::AfterImplicit: return "after-implicit";
  }
  return "?";
}

QuestionCategory question_category_from_string(const std::string& name) {
  static const std::vector<QuestionCategory> all = {
      QuestionCategory::InExplicit,     QuestionCategory::BetweenExplicit,
      QuestionCategory::InImplicit,     QuestionCategory::BetweenImplicit,
      QuestionCategory::BeforeImplicit, QuestionCategory::AfterImplicit,
  };
  for (auto c : all)
    if (name == to_string(c)) return c;
  throw ValidationError("unknown question category: " + name);
}

}  // namespace chronograph::corpus
