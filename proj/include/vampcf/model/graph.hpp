#pragma once

#include <optional>
#include <unordered_map>

#include "vampcf/model/params.hpp"
#include "vampcf/numcore/tape.hpp"

// Tape-level building blocks of the model. Everything here records onto a
// caller-owned Tape so one forward pass can be differentiated with respect
// to every parameter tensor, pseudo-inputs included.

namespace vampcf::model::graph {

using numcore::Tape;
using numcore::Var;

/// Lazily turns parameter tensors into tape leaves. When `grads` is given
/// (shaped like `params`), backward() accumulates into its tensors.
class ParamBinding {
 public:
  ParamBinding(Tape& tape, const ModelParams& params, ModelParams* grads = nullptr);

  Var operator()(const Matrix& tensor);
  Tape& tape() { return tape_; }
  const ModelParams& params() const { return params_; }

 private:
  Tape& tape_;
  const ModelParams& params_;
  std::unordered_map<const Matrix*, Matrix*> sinks_;
  std::unordered_map<const Matrix*, Var> cache_;
};

struct GaussVars {
  Var mean;
  Var log_var;
};

inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 10.0;

Var gated_layer(ParamBinding& bind, Var x, const GatedLayerParams& layer);
Var trunk(ParamBinding& bind, Var x, std::span<const GatedLayerParams> layers);
GaussVars gaussian_head(ParamBinding& bind, Var h, const GaussianHeadParams& head);

/// Row-wise L2 normalization of (possibly dropped-out) inputs.
Var normalize_input(Var x);

/// q(z2 | x) from an already normalized input.
GaussVars encode_z2(ParamBinding& bind, Var x_normalized);
/// q(z1 | x, z2) from the normalized input and a z2 sample.
GaussVars encode_z1(ParamBinding& bind, Var x_normalized, Var z2);
/// p(z1 | z2).
GaussVars prior_z1(ParamBinding& bind, Var z2);
/// Unnormalized item logits; z2 is required exactly for two-level models.
Var decode(ParamBinding& bind, Var z1, std::optional<Var> z2);

/// mean + exp(log_var / 2) * noise
Var reparameterize(const GaussVars& g, Var noise);

/// Per-row log-likelihood (n x 1) of binary rows x under the logits.
Var log_likelihood_rows(Var logits, Var x, Likelihood likelihood);
/// Per-row closed-form KL(q || p) between diagonal Gaussians (n x 1).
Var kl_diag_gauss_rows(const GaussVars& q, const GaussVars& p);
/// Per-row KL(q || N(0, I)).
Var kl_standard_normal_rows(const GaussVars& q);
/// Per-row log N(z_r; mean_r, diag exp(log_var_r)).
Var gauss_log_pdf_rows(Var z, const GaussVars& g);
/// Per-row log VampPrior density: logsumexp_k log q(z | u_k) - log K.
Var vamp_log_density_rows(ParamBinding& bind, Var z);

/// Sampling noise for one ELBO evaluation, drawn up front so the same
/// forward pass can be replayed (finite differences, determinism tests).
struct ElboNoise {
  Matrix eps_z2;         // rows x latent_z2
  Matrix eps_z1;         // rows x latent_z1, two-level only
  Matrix dropout_scale;  // rows x M of 0 or 1/(1-rate); empty in eval mode
};

ElboNoise draw_noise(const ModelConfig& config, std::size_t rows, Mode mode, double dropout_rate,
                     Rng& rng);

struct ElboGraph {
  Var loss;       // 1 x 1, -mean_r elbo_r
  Var elbo_rows;  // n x 1
  Var recon_rows;
  Var kl_z1_rows;  // zero column for flat models
  Var kl_z2_rows;
};

ElboGraph build_elbo(ParamBinding& bind, const Matrix& x, double beta, const ElboNoise& noise);

}  // namespace vampcf::model::graph
