#pragma once

#include <cstdint>
#include <vector>

#include "vampcf/model/params.hpp"

namespace vampcf::trainer {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment estimates, one per parameter tensor, plus the
/// number of updates applied so far.
struct OptimizerState {
  std::vector<numcore::Matrix> first;
  std::vector<numcore::Matrix> second;
  std::uint64_t step = 0;
};

OptimizerState make_optimizer_state(const model::ModelParams& params);

/// One bias-corrected adaptive-moment update of every tensor. A non-finite
/// gradient raises NumericalError (tensor name, step) before anything changes.
void adam_step(model::ModelParams& params, const model::ModelParams& grads, OptimizerState& state,
               double learning_rate, const AdamConfig& config = {});

}  // namespace vampcf::trainer
