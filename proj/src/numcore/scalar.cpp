#include "vampcf/numcore/scalar.hpp"

#include <algorithm>

#include "vampcf/error.hpp"

namespace vampcf::numcore {

double logsumexp(std::span<const double> v) {
  if (v.empty()) throw DomainError("logsumexp of an empty vector");
  if (v.size() == 1) return v[0];
  const double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  // Summing the shifted terms in ascending order makes the result exactly
  // permutation invariant.
  std::vector<double> terms(v.size());
  std::transform(v.begin(), v.end(), terms.begin(), [mx](double x) { return std::exp(x - mx); });
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return mx + std::log(acc);
}

std::vector<double> softmax_log(std::span<const double> logits) {
  const double lse = logsumexp(logits);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

}  // namespace vampcf::numcore
