#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vampcf/model/graph.hpp"
#include "vampcf/model/params.hpp"

// Value-level model operations. Each call evaluates a fresh tape without
// gradients; training goes through loss_and_gradient().

namespace vampcf::model {

/// Diagonal Gaussian, one distribution per row.
struct GaussianParams {
  Matrix mean;
  Matrix log_var;
};

struct LatentSample {
  Matrix z;
  GaussianParams params;
  Matrix noise;
};

Matrix gated_layer(const Matrix& x, const GatedLayerParams& layer);

/// q(z2 | x). Train mode applies input dropout (rng required); eval mode is
/// deterministic. Inputs are L2-normalized row-wise, zero rows excepted.
GaussianParams encode_z2(const Matrix& x, const ModelParams& params, Mode mode = Mode::eval,
                         Rng* rng = nullptr, double dropout_rate = 0.5);
/// q(z1 | x, z2); ConfigError on a flat model.
GaussianParams encode_z1(const Matrix& x, const LatentSample& z2, const ModelParams& params);
/// p(z1 | z2); ConfigError on a flat model.
GaussianParams prior_z1(const LatentSample& z2, const ModelParams& params);

/// z = mean + exp(log_var / 2) * eps, eps ~ N(0, I).
LatentSample sample(const GaussianParams& g, Rng& rng);

/// Item logits from latents; z2 must be given exactly for two-level models.
Matrix decode(const Matrix& z1, const Matrix* z2, const ModelParams& params);
Matrix decode(const LatentSample& z1, const LatentSample* z2, const ModelParams& params);

// Log-likelihoods summed over rows. The multinomial coefficient is omitted.
double log_lik_multinomial(const Matrix& logits, const Matrix& x);
double log_lik_bernoulli(const Matrix& logits, const Matrix& x);

/// Closed-form KL(q || p), summed over rows.
double kl_diag_gauss(const GaussianParams& q, const GaussianParams& p);

/// log p(z) under the VampPrior for a single latent vector.
double vamp_log_density(std::span<const double> z, const ModelParams& params);
/// One log density per row of z.
std::vector<double> vamp_log_density(const Matrix& z, const ModelParams& params);

/// Per-user means of the single-sample ELBO and its components.
struct ElboTerms {
  double elbo = 0.0;
  double recon = 0.0;
  double kl_z1 = 0.0;
  double kl_z2 = 0.0;  // closed form (standard prior) or log q - log p (vamp)
};

ElboTerms elbo(const Matrix& x, const ModelParams& params, double beta, Rng& rng,
               Mode mode = Mode::eval, double dropout_rate = 0.5);

/// Value of -mean ELBO with frozen noise; fills `grads` (shaped like
/// params, accumulated into) and `terms` when non-null.
double loss_and_gradient(const Matrix& x, const ModelParams& params, double beta,
                         const graph::ElboNoise& noise, ModelParams* grads, ElboTerms* terms);

/// Monte Carlo split of the ELBO into reconstruction, posterior entropy of
/// q(z2|x) and cross-entropy of the prior under the aggregated posterior.
struct ElboDecomposition {
  double recon = 0.0;
  double posterior_entropy = 0.0;
  double cross_entropy_prior = 0.0;
  double cross_entropy_stderr = 0.0;  // standard error of the MC estimate
};

ElboDecomposition elbo_decomposition(const Matrix& x, const ModelParams& params, std::size_t n_mc,
                                     Rng& rng);

/// Deterministic user representation: posterior means, no dropout.
/// Flat models return z1 == z2.
struct FoldInLatents {
  Matrix z1;
  Matrix z2;
};

FoldInLatents fold_in_latents(const Matrix& x, const ModelParams& params);

/// decode(fold_in_latents(x)): item logits used for ranking.
Matrix score(const Matrix& x, const ModelParams& params);

}  // namespace vampcf::model
