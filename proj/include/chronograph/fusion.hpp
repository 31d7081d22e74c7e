#pragma once

#include <string>

#include "chronograph/autodiff.hpp"
#include "chronograph/params.hpp"

namespace chronograph::fusion {

// lambda = sigmoid(a Wa + b Wb); out = (1 - lambda) . a + lambda . b.
// The same gating form backs both the multi-view fusion and AdapGate.
num::Var adaptive_fuse(num::Var a, num::Var b, num::BoundParams& params,
                       const std::string& prefix, num::ForwardProbe* probe);

// Multi-head cross-attention with per-head Q/K/V projections and an output
// projection; scores are scaled by 1/sqrt(head_dim).
num::Var mhca(num::Var queries, num::Var keys, num::Var values, num::BoundParams& params,
              const std::string& prefix, int n_heads, num::ForwardProbe* probe);

// Question-guided text-graph fusion: a learned query bank summarizes the
// graph states, token representations attend over the summary, and an
// adaptive gate folds the result back into the text.
num::Var question_guided_fuse(num::Var h_text, num::Var v_fuse, num::BoundParams& params,
                              int n_heads, num::ForwardProbe* probe);

void create_fuse_params(num::ParamStore& store, const std::string& prefix, int hidden);
void create_mhca_params(num::ParamStore& store, const std::string& prefix, int hidden);
void create_question_guided_params(num::ParamStore& store, int hidden, int n_query);

}  // namespace chronograph::fusion
