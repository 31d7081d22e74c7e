#pragma once

#include <Eigen/Dense>

namespace chronograph::num {

// Dense row-major doubles; the one math type everything is built on.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, const char* what);

}  // namespace chronograph::num
