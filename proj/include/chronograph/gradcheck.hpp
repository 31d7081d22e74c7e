#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chronograph/params.hpp"

namespace chronograph::num {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  double eps = 0.0;
  double tol = 0.0;
  bool passed = true;

  std::string summary() const;
};

// loss_fn(params, with_grads) evaluates a deterministic scalar loss; when
// with_grads it must also accumulate parameter gradients into params. The
// checker compares those gradients against central finite differences,
// entry by entry, with relative error |g - fd| / max(1, |g|, |fd|).
GradCheckReport grad_check(const std::function<double(ParamStore&, bool)>& loss_fn,
                           ParamStore& params, double eps, double tol);

}  // namespace chronograph::num
