#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronograph/model.hpp"
#include "chronograph/params.hpp"

namespace chronograph::qeval {

// Question slicing in the in/between/before/after x explicit/implicit grid.
// A question is explicit when every date component of its time expression
// occurs verbatim in the document (bare years as standalone numbers).
struct QuestionInfo {
  std::optional<timex::TimeXMention> mention;
  bool is_explicit = false;
  std::string category;  // e.g. "in-explicit"; "no-timex" when nothing parses
};

QuestionInfo classify_question(const corpus::Document& doc);

// Maps a predicted fact (or the unanswerable slot) to an answer string by
// reading the role/organization out of the fact sentence.
std::string realize_answer(const model::DocArtifacts& art, int predicted);

using Predictor = std::function<std::string(const corpus::Document&)>;

struct CategoryStats {
  int count = 0;
  double em_sum = 0.0;
  double f1_sum = 0.0;
  double em() const { return count ? 100.0 * em_sum / count : 0.0; }
  double f1() const { return count ? 100.0 * f1_sum / count : 0.0; }
};

struct EvalReport {
  std::map<std::string, CategoryStats> per_category;
  CategoryStats overall;
  std::string table() const;
};

EvalReport evaluate(const std::vector<corpus::Document>& docs, const Predictor& predict);

// The trained model as a predictor. Artifacts are rebuilt per call.
Predictor model_predictor(num::ParamStore& params, const model::ModelConfig& config);

// Echoes the first gold answer; the consistency upper bound.
Predictor gold_echo_predictor();

// A brittle baseline with no time semantics: hashes the question text and
// picks a fact by the hash. Any wording change moves the pick.
Predictor question_hash_predictor(const model::ModelConfig& config);

}  // namespace chronograph::qeval
