#include "vampcf/numcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "vampcf/error.hpp"

namespace vampcf::numcore {

double grad_check(const std::function<double(const Matrix&)>& f, const Matrix& params,
                  const Matrix& analytic, double eps) {
  if (!(eps >= 1e-6 && eps <= 1e-3)) {
    throw DomainError("grad_check: eps must lie in [1e-6, 1e-3]");
  }
  require_same_shape(params, analytic, "grad_check");
  Matrix probe = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + eps;
    const double up = f(probe);
    probe[i] = orig - eps;
    const double down = f(probe);
    probe[i] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("grad_check: non-finite function value at perturbed entry " +
                           std::to_string(i));
    }
    const double fd = (up - down) / (2.0 * eps);
    const double rel = std::abs(analytic[i] - fd) / std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, rel);
  }
  return worst;
}

double grad_check(const ScalarFn& f, const Matrix& params, double eps) {
  Matrix analytic(params.rows(), params.cols());
  const double f0 = f(params, &analytic);
  if (!std::isfinite(f0)) throw NumericalError("grad_check: non-finite function value");
  return grad_check([&f](const Matrix& p) { return f(p, nullptr); }, params, analytic, eps);
}

}  // namespace vampcf::numcore
