#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vampcf/dataset/interactions.hpp"
#include "vampcf/model/config.hpp"
#include "vampcf/numcore/matrix.hpp"

namespace vampcf::model {

using numcore::Matrix;
using Rng = std::mt19937_64;

/// h(x) = (xW + b) * sigmoid(xV + c) when gated, tanh(xW + b) otherwise.
/// V and c are empty matrices for ungated layers.
struct GatedLayerParams {
  Matrix W, b, V, c;
  bool gated = false;

  std::size_t in() const { return W.rows(); }
  std::size_t out() const { return W.cols(); }
};

/// Linear mean and log-variance projections of a trunk's features.
struct GaussianHeadParams {
  Matrix mean_W, mean_b, log_var_W, log_var_b;
};

struct NamedTensor {
  std::string name;
  Matrix* value;
};

struct ConstNamedTensor {
  std::string name;
  const Matrix* value;
};

/// Every learnable tensor of one model. Unused groups (the z1 networks of a
/// flat model, pseudo-inputs under the standard prior) stay empty.
///
/// encoder_z1[0] maps the normalized input to features; its output is
/// concatenated with z2 before the remaining layers (or the head when
/// depth == 1).
struct ModelParams {
  ModelConfig config;

  std::vector<GatedLayerParams> encoder_z2;
  GaussianHeadParams head_z2;

  std::vector<GatedLayerParams> encoder_z1;
  GaussianHeadParams head_z1;

  std::vector<GatedLayerParams> prior_z1;
  GaussianHeadParams head_prior_z1;

  std::vector<GatedLayerParams> decoder;
  Matrix out_W, out_b;

  Matrix pseudo_inputs;  // K x M

  /// All-zero parameters with the shapes implied by `config`.
  static ModelParams zeros(const ModelConfig& config);

  /// Tensors in a fixed order; this order defines checkpoint layout.
  std::vector<NamedTensor> tensors();
  std::vector<ConstNamedTensor> tensors() const;

  std::size_t parameter_count() const;
};

/// Glorot-normal weights, zero biases, and pseudo-inputs copied from K
/// training rows chosen uniformly at random plus N(0, 0.01^2) jitter.
ModelParams initialize(const ModelConfig& config, std::span<const dataset::InteractionVector> train,
                       Rng& rng);

}  // namespace vampcf::model
