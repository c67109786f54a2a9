#pragma once

#include <algorithm>
#include <cmath>

namespace gspkit::detail {

// Eigen's LU condition estimate can report 1 for exactly singular matrices
// (a zero pivot is skipped), so it is capped by the pivot magnitude ratio.
template <class Lu>
double reciprocal_condition(const Lu& lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
  const double hi = pivots.maxCoeff();
  if (!(hi > 0.0) || !std::isfinite(hi)) return 0.0;
  const double estimate = lu.rcond();
  if (!std::isfinite(estimate)) return 0.0;
  return std::min(estimate, pivots.minCoeff() / hi);
}

}  // namespace gspkit::detail
