#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace vampcf::numcore {

/// log(sum_i exp(v_i)) with max-subtraction. Throws DomainError on empty input.
double logsumexp(std::span<const double> v);

/// Log of the softmax of `logits`; exp of the result sums to one.
std::vector<double> softmax_log(std::span<const double> logits);

// Branch-stable logistic functions.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log sigma(x) = -softplus(-x)
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace vampcf::numcore
