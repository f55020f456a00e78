#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vampcf/model/config.hpp"

namespace vampcf::cli {

/// Every valid {prior} x {hierarchy} x {gated} x {likelihood} combination
/// at the tiny gradient-check size (M=30, hidden 16, latents 4, K=3).
std::vector<model::ModelConfig> gradcheck_grid();

std::string cell_name(const model::ModelConfig& config);

struct GradcheckResult {
  std::string cell;
  double max_rel_error = 0.0;
  std::string worst_tensor;
  bool passed = false;
};

/// Central-difference check of -ELBO against the tape gradient for every
/// parameter tensor, with sampling noise frozen. `corrupt` perturbs the
/// analytic gradient (negative control for the checker itself).
GradcheckResult check_model_gradients(const model::ModelConfig& config, std::uint64_t seed,
                                      double eps = 1e-5, double tolerance = 1e-4,
                                      bool corrupt = false);

}  // namespace vampcf::cli
