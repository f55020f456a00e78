#include "vampcf/trainer/adam.hpp"

#include <cmath>

#include "vampcf/error.hpp"

namespace vampcf::trainer {

OptimizerState make_optimizer_state(const model::ModelParams& params) {
  OptimizerState s;
  for (const auto& t : params.tensors()) {
    s.first.emplace_back(t.value->rows(), t.value->cols());
    s.second.emplace_back(t.value->rows(), t.value->cols());
  }
  return s;
}

void adam_step(model::ModelParams& params, const model::ModelParams& grads, OptimizerState& state,
               double learning_rate, const AdamConfig& config) {
  auto p = params.tensors();
  const auto g = grads.tensors();
  if (p.size() != g.size() || p.size() != state.first.size()) {
    throw ShapeError("adam_step: parameter, gradient and state layouts differ");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    numcore::require_same_shape(*p[i].value, *g[i].value, "adam_step");
    numcore::require_same_shape(*p[i].value, state.first[i], "adam_step");
    if (!g[i].value->all_finite()) {
      throw NumericalError("non-finite gradient in " + p[i].name + " at step " +
                           std::to_string(state.step + 1));
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(config.beta1, t);
  const double correct2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < p.size(); ++i) {
    numcore::Matrix& w = *p[i].value;
    const numcore::Matrix& grad = *g[i].value;
    numcore::Matrix& m = state.first[i];
    numcore::Matrix& v = state.second[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * grad[j];
      v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * grad[j] * grad[j];
      const double m_hat = m[j] / correct1;
      const double v_hat = v[j] / correct2;
      w[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

}  // namespace vampcf::trainer
