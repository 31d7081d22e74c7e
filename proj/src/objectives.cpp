#include "chronograph/objectives.hpp"

#include <memory>

#include "chronograph/errors.hpp"

namespace chronograph::objectives {

using num::Matrix;
using num::Var;

int tc_label_index(timex::TemporalRelation r) {
  switch (r) {
    case timex::TemporalRelation::Before: return 0;
    case timex::TemporalRelation::After: return 1;
    case timex::TemporalRelation::Overlap: return 2;
  }
  return 2;
}

Var tc_logits(Var fact_states, const std::vector<timex::PairLabel>& pairs,
              num::BoundParams& params) {
  auto lhs = std::make_shared<std::vector<int>>();
  auto rhs = std::make_shared<std::vector<int>>();
  for (const auto& p : pairs) {
    if (p.i < 0 || p.j < 0 || p.i >= fact_states.rows() || p.j >= fact_states.rows())
      throw ValidationError("pair index out of range");
    lhs->push_back(p.i);
    rhs->push_back(p.j);
  }
  Var pair_input = num::hconcat({num::gather_rows(fact_states, lhs),
                                 num::gather_rows(fact_states, rhs)});
  Var hidden = num::elu(
      num::add_rowvec(num::matmul(pair_input, params["tc.w1"]), params["tc.b1"]));
  return num::add_rowvec(num::matmul(hidden, params["tc.w2"]), params["tc.b2"]);
}

Var time_comparing_loss(Var fact_states, const std::vector<timex::PairLabel>& pairs,
                        num::BoundParams& params, bool mean_reduction) {
  if (pairs.empty()) return fact_states.tape->input(Matrix::Zero(1, 1));
  Var logits = tc_logits(fact_states, pairs, params);
  auto targets = std::make_shared<std::vector<int>>();
  for (const auto& p : pairs) targets->push_back(tc_label_index(p.label));
  return num::cross_entropy(logits, targets, mean_reduction);
}

Var task_logits(Var question_feat, Var fact_feats, num::BoundParams& params) {
  if (question_feat.rows() != 1) throw NumericalError("question feature must be one row");
  Var qb = num::matmul(question_feat, params["task.bilinear"]);  // 1 x h
  Var candidates = fact_feats.defined()
                       ? num::vconcat({fact_feats, params["task.unanswerable"]})
                       : params["task.unanswerable"];
  Var bilinear = num::matmul(candidates, num::transpose(qb));    // (nf+1) x 1
  Var linear = num::matmul(candidates, params["task.w"]);        // (nf+1) x 1
  return num::transpose(num::add(bilinear, linear));             // 1 x (nf+1)
}

Var task_loss(Var logits, int gold) {
  if (gold < 0 || gold >= logits.cols())
    throw ValidationError("gold index out of range");
  auto targets = std::make_shared<std::vector<int>>(std::vector<int>{gold});
  return num::cross_entropy(logits, targets, true);
}

Var total_loss(Var task, Var tc, double loss_lambda) {
  return num::add(task, num::scale(tc, loss_lambda));
}

void create_tc_params(num::ParamStore& store, int hidden) {
  store.create("tc.w1", 2 * hidden, hidden);
  store.create("tc.b1", 1, hidden);
  store.create("tc.w2", hidden, 3);
  store.create("tc.b2", 1, 3);
}

void create_task_params(num::ParamStore& store, int hidden) {
  store.create("task.bilinear", hidden, hidden);
  store.create("task.w", hidden, 1);
  store.create("task.unanswerable", 1, hidden);
}

}  // namespace chronograph::objectives
