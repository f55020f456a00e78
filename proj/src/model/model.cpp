#include "vampcf/model/model.hpp"

#include <cmath>
#include <numbers>

#include "vampcf/error.hpp"
#include "vampcf/numcore/ops.hpp"
#include "vampcf/numcore/scalar.hpp"

namespace vampcf::model {

namespace {

GaussianParams read(const graph::GaussVars& g) { return {g.mean.value(), g.log_var.value()}; }

graph::GaussVars constant(numcore::Tape& t, const GaussianParams& g) {
  return {t.constant_ref(g.mean), t.constant_ref(g.log_var)};
}

void require_items(const Matrix& x, const ModelParams& params, const char* op) {
  if (x.cols() != params.config.n_items) {
    throw ShapeError(std::string(op) + ": input has " + std::to_string(x.cols()) +
                     " items, model expects " + std::to_string(params.config.n_items));
  }
}

double sum_rows(const numcore::Var& v) {
  double acc = 0.0;
  for (double x : v.value().values()) acc += x;
  return acc;
}

}  // namespace

Matrix gated_layer(const Matrix& x, const GatedLayerParams& layer) {
  numcore::Tape t;
  ModelParams none;
  graph::ParamBinding bind(t, none);
  return graph::gated_layer(bind, t.constant_ref(x), layer).value();
}

GaussianParams encode_z2(const Matrix& x, const ModelParams& params, Mode mode, Rng* rng,
                         double dropout_rate) {
  require_items(x, params, "encode_z2");
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  graph::Var input = t.constant_ref(x);
  if (mode == Mode::train && dropout_rate > 0.0) {
    if (rng == nullptr) throw ConfigError("encode_z2: train mode needs an rng for dropout");
    Matrix dropped = x;
    std::bernoulli_distribution keep(1.0 - dropout_rate);
    for (double& v : dropped.values()) v = keep(*rng) ? v / (1.0 - dropout_rate) : 0.0;
    input = t.constant(std::move(dropped));
  }
  return read(graph::encode_z2(bind, graph::normalize_input(input)));
}

GaussianParams encode_z1(const Matrix& x, const LatentSample& z2, const ModelParams& params) {
  require_items(x, params, "encode_z1");
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  return read(graph::encode_z1(bind, graph::normalize_input(t.constant_ref(x)), t.constant_ref(z2.z)));
}

GaussianParams prior_z1(const LatentSample& z2, const ModelParams& params) {
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  return read(graph::prior_z1(bind, t.constant_ref(z2.z)));
}

LatentSample sample(const GaussianParams& g, Rng& rng) {
  numcore::require_same_shape(g.mean, g.log_var, "sample");
  LatentSample s{Matrix(g.mean.rows(), g.mean.cols()), g, Matrix(g.mean.rows(), g.mean.cols())};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    s.noise[i] = normal(rng);
    s.z[i] = g.mean[i] + std::exp(0.5 * g.log_var[i]) * s.noise[i];
  }
  return s;
}

Matrix decode(const Matrix& z1, const Matrix* z2, const ModelParams& params) {
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  std::optional<graph::Var> z2v;
  if (z2 != nullptr) z2v = t.constant_ref(*z2);
  return graph::decode(bind, t.constant_ref(z1), z2v).value();
}

Matrix decode(const LatentSample& z1, const LatentSample* z2, const ModelParams& params) {
  return decode(z1.z, z2 != nullptr ? &z2->z : nullptr, params);
}

double log_lik_multinomial(const Matrix& logits, const Matrix& x) {
  numcore::require_same_shape(logits, x, "log_lik_multinomial");
  numcore::Tape t;
  return sum_rows(graph::log_likelihood_rows(t.constant_ref(logits), t.constant_ref(x),
                                             Likelihood::multinomial));
}

double log_lik_bernoulli(const Matrix& logits, const Matrix& x) {
  numcore::require_same_shape(logits, x, "log_lik_bernoulli");
  numcore::Tape t;
  return sum_rows(graph::log_likelihood_rows(t.constant_ref(logits), t.constant_ref(x),
                                             Likelihood::bernoulli));
}

double kl_diag_gauss(const GaussianParams& q, const GaussianParams& p) {
  numcore::require_same_shape(q.mean, q.log_var, "kl_diag_gauss");
  numcore::require_same_shape(p.mean, p.log_var, "kl_diag_gauss");
  numcore::require_same_shape(q.mean, p.mean, "kl_diag_gauss");
  numcore::Tape t;
  return sum_rows(graph::kl_diag_gauss_rows(constant(t, q), constant(t, p)));
}

std::vector<double> vamp_log_density(const Matrix& z, const ModelParams& params) {
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  const Matrix& out = graph::vamp_log_density_rows(bind, t.constant_ref(z)).value();
  return {out.values().begin(), out.values().end()};
}

double vamp_log_density(std::span<const double> z, const ModelParams& params) {
  return vamp_log_density(Matrix::row_vector(z), params).front();
}

double loss_and_gradient(const Matrix& x, const ModelParams& params, double beta,
                         const graph::ElboNoise& noise, ModelParams* grads, ElboTerms* terms) {
  numcore::Tape t;
  graph::ParamBinding bind(t, params, grads);
  const graph::ElboGraph g = graph::build_elbo(bind, x, beta, noise);
  if (terms != nullptr) {
    const double n = static_cast<double>(x.rows());
    terms->elbo = sum_rows(g.elbo_rows) / n;
    terms->recon = sum_rows(g.recon_rows) / n;
    terms->kl_z1 = sum_rows(g.kl_z1_rows) / n;
    terms->kl_z2 = sum_rows(g.kl_z2_rows) / n;
  }
  if (grads != nullptr) t.backward(g.loss);
  return g.loss.value().item();
}

ElboTerms elbo(const Matrix& x, const ModelParams& params, double beta, Rng& rng, Mode mode,
               double dropout_rate) {
  const graph::ElboNoise noise = graph::draw_noise(params.config, x.rows(), mode, dropout_rate, rng);
  ElboTerms terms;
  loss_and_gradient(x, params, beta, noise, nullptr, &terms);
  return terms;
}

ElboDecomposition elbo_decomposition(const Matrix& x, const ModelParams& params, std::size_t n_mc,
                                     Rng& rng) {
  if (x.rows() == 0) throw DomainError("elbo_decomposition: empty batch");
  if (n_mc < 2) throw DomainError("elbo_decomposition: n_mc must be at least 2");
  const ModelConfig& cfg = params.config;
  const std::size_t n = x.rows();
  const double log_2pi = std::log(2.0 * std::numbers::pi);

  const GaussianParams q2 = encode_z2(x, params, Mode::eval);
  ElboDecomposition out;
  for (double lv : q2.log_var.values()) out.posterior_entropy += 0.5 * (lv + 1.0 + log_2pi);
  out.posterior_entropy /= static_cast<double>(n);

  // Per-user running sums of -log p(z) for the within-user variance.
  std::vector<double> ce_sum(n, 0.0);
  std::vector<double> ce_sq(n, 0.0);
  double recon_total = 0.0;
  for (std::size_t s = 0; s < n_mc; ++s) {
    const graph::ElboNoise noise = graph::draw_noise(cfg, n, Mode::eval, 0.0, rng);
    numcore::Tape t;
    graph::ParamBinding bind(t, params);
    const graph::ElboGraph g = graph::build_elbo(bind, x, 0.0, noise);
    recon_total += sum_rows(g.recon_rows);

    Matrix z(n, cfg.latent_z2);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = q2.mean[i] + std::exp(0.5 * q2.log_var[i]) * noise.eps_z2[i];
    }
    std::vector<double> log_prior(n);
    if (cfg.vamp()) {
      log_prior = vamp_log_density(z, params);
    } else {
      for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (double v : z.row(r)) acc += log_2pi + v * v;
        log_prior[r] = -0.5 * acc;
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      ce_sum[r] -= log_prior[r];
      ce_sq[r] += log_prior[r] * log_prior[r];
    }
  }

  const double mc = static_cast<double>(n_mc);
  double var_of_mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double mean = ce_sum[r] / mc;
    const double var = std::max(0.0, (ce_sq[r] - mc * mean * mean) / (mc - 1.0));
    out.cross_entropy_prior += mean;
    var_of_mean += var / mc;
  }
  const double users = static_cast<double>(n);
  out.cross_entropy_prior /= users;
  out.cross_entropy_stderr = std::sqrt(var_of_mean) / users;
  out.recon = recon_total / (users * mc);
  return out;
}

FoldInLatents fold_in_latents(const Matrix& x, const ModelParams& params) {
  require_items(x, params, "fold_in_latents");
  numcore::Tape t;
  graph::ParamBinding bind(t, params);
  graph::Var xn = graph::normalize_input(t.constant_ref(x));
  const graph::GaussVars q2 = graph::encode_z2(bind, xn);
  FoldInLatents out;
  out.z2 = q2.mean.value();
  out.z1 = params.config.two_level() ? graph::encode_z1(bind, xn, q2.mean).mean.value() : out.z2;
  return out;
}

Matrix score(const Matrix& x, const ModelParams& params) {
  const FoldInLatents lat = fold_in_latents(x, params);
  return decode(lat.z1, params.config.two_level() ? &lat.z2 : nullptr, params);
}

}  // namespace vampcf::model
