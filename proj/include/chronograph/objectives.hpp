#pragma once

#include <vector>

#include "chronograph/autodiff.hpp"
#include "chronograph/params.hpp"
#include "chronograph/timex.hpp"

namespace chronograph::objectives {

// Pairwise 3-way classifier logits over [h_i ; h_j] through a two-layer MLP
// (2h -> h -> 3). fact_states rows follow the fact-node order.
num::Var tc_logits(num::Var fact_states, const std::vector<timex::PairLabel>& pairs,
                   num::BoundParams& params);

// Cross-entropy of the pair classifier against the interval pseudo-labels;
// an empty pair list contributes a constant zero.
num::Var time_comparing_loss(num::Var fact_states, const std::vector<timex::PairLabel>& pairs,
                             num::BoundParams& params, bool mean_reduction);

// Fact-selection scores: bilinear question/fact interaction plus a linear
// term, with a learned unanswerable row appended as the last class.
num::Var task_logits(num::Var question_feat, num::Var fact_feats, num::BoundParams& params);

num::Var task_loss(num::Var logits, int gold);

num::Var total_loss(num::Var task, num::Var tc, double loss_lambda);

void create_tc_params(num::ParamStore& store, int hidden);
void create_task_params(num::ParamStore& store, int hidden);

int tc_label_index(timex::TemporalRelation r);

}  // namespace chronograph::objectives
