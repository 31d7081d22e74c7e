#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chronograph/corpus.hpp"
#include "chronograph/qeval.hpp"
#include "chronograph/rng.hpp"
#include "chronograph/timex.hpp"

namespace chronograph::perturb {

struct QuestionConstraint {
  timex::TimeXCategory category = timex::TimeXCategory::In;
  timex::TimeInterval interval;
  int begin = 0;  // [begin, end) char span in the question text
  int end = 0;
  std::string surface;
};

std::optional<QuestionConstraint> extract_constraint(const std::string& question);

// A constraint can be perturbed when its interval is finite and spans at
// least three points of the 1/12-year grid.
bool perturbable(const QuestionConstraint& constraint);

// Uniformly samples a strict grid sub-interval [s', e'] of [s, e] and renders
// it back to words ("in 1954", "in March 1954", "between March 1954 and 1956").
QuestionConstraint perturb(const QuestionConstraint& constraint, std::uint64_t rng_seed);
QuestionConstraint perturb_with(const QuestionConstraint& constraint, Rng& rng);

// Splices the perturbed expression into the question text.
std::string apply_to_question(const std::string& question, const QuestionConstraint& original,
                              const QuestionConstraint& perturbed);

struct ConsistencyReport {
  int n_consistent = 0;
  int n_inconsistent = 0;
  double score() const {
    return static_cast<double>(n_consistent) / (n_consistent + n_inconsistent);
  }
};

// Perturbs each question (sequential RNG consumption), re-evaluates, and
// counts answers that stay exactly correct. Documents must already be
// answered correctly by eval_fn before perturbation.
ConsistencyReport consistency(const qeval::Predictor& eval_fn,
                              const std::vector<corpus::Document>& questions,
                              std::uint64_t rng_seed);

// The selection step of the protocol: keep documents whose question is
// perturbable (In/Between with finite spans) and answered exactly right,
// then sample up to max_n of them.
std::vector<corpus::Document> select_consistency_pool(
    const std::vector<corpus::Document>& docs, const qeval::Predictor& eval_fn,
    std::uint64_t rng_seed, int max_n, bool implicit_only);

}  // namespace chronograph::perturb
