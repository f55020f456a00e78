#pragma once

#include <functional>

#include "vampcf/numcore/matrix.hpp"

namespace vampcf::numcore {

/// A scalar function of a parameter matrix. When `grad` is non-null the
/// callee writes the analytic gradient (same shape as the parameters).
using ScalarFn = std::function<double(const Matrix& params, Matrix* grad)>;

/// Max over entries of |analytic - central difference| / max(1, |analytic|).
/// eps must lie in [1e-6, 1e-3]; non-finite f at a perturbed point throws
/// NumericalError.
double grad_check(const ScalarFn& f, const Matrix& params, double eps);

/// Same comparison against an externally supplied analytic gradient,
/// with f only evaluated (never asked for a gradient).
double grad_check(const std::function<double(const Matrix&)>& f, const Matrix& params,
                  const Matrix& analytic, double eps);

}  // namespace vampcf::numcore
