#include "chronograph/gradcheck.hpp"

#include <cmath>
#include <sstream>

#include "chronograph/errors.hpp"

namespace chronograph::num {

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL") << " max rel err " << max_rel_err << " (tol " << tol
     << ", eps " << eps << ", " << entries.size() << " parameters)";
  return os.str();
}

GradCheckReport grad_check(const std::function<double(ParamStore&, bool)>& loss_fn,
                           ParamStore& params, double eps, double tol) {
  GradCheckReport report;
  report.eps = eps;
  report.tol = tol;

  params.zero_grads();
  const double base = loss_fn(params, true);
  if (!std::isfinite(base)) throw NumericalError("grad_check: non-finite loss");

  std::map<std::string, Matrix> analytic;
  for (const auto& [name, v] : params.values()) analytic[name] = params.grad(name);

  for (auto& [name, v] : params.values()) {
    GradCheckEntry entry;
    entry.name = name;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double saved = v(i, j);
        v(i, j) = saved + eps;
        const double up = loss_fn(params, false);
        v(i, j) = saved - eps;
        const double down = loss_fn(params, false);
        v(i, j) = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
          throw NumericalError("grad_check: non-finite loss at " + name);
        const double fd = (up - down) / (2.0 * eps);
        const double g = analytic[name](i, j);
        const double abs_err = std::abs(g - fd);
        const double rel = abs_err / std::max({1.0, std::abs(g), std::abs(fd)});
        entry.max_abs_err = std::max(entry.max_abs_err, abs_err);
        entry.max_rel_err = std::max(entry.max_rel_err, rel);
      }
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.entries.push_back(std::move(entry));
  }
  report.passed = report.max_rel_err <= tol;
  return report;
}

}  // namespace chronograph::num
