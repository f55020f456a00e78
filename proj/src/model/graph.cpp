#include "vampcf/model/graph.hpp"

#include <cmath>
#include <numbers>

#include "vampcf/error.hpp"
#include "vampcf/numcore/ops.hpp"

namespace vampcf::model::graph {

namespace ops = numcore::ops;

ParamBinding::ParamBinding(Tape& tape, const ModelParams& params, ModelParams* grads)
    : tape_(tape), params_(params) {
  if (grads == nullptr) return;
  auto src = params.tensors();
  auto dst = grads->tensors();
  if (src.size() != dst.size()) throw ShapeError("ParamBinding: gradient layout differs from params");
  for (std::size_t i = 0; i < src.size(); ++i) {
    require_same_shape(*src[i].value, *dst[i].value, "ParamBinding");
    sinks_.emplace(src[i].value, dst[i].value);
  }
}

Var ParamBinding::operator()(const Matrix& tensor) {
  if (auto it = cache_.find(&tensor); it != cache_.end()) return it->second;
  Matrix* sink = nullptr;
  if (auto it = sinks_.find(&tensor); it != sinks_.end()) sink = it->second;
  Var v = tape_.parameter(tensor, sink);
  cache_.emplace(&tensor, v);
  return v;
}

Var gated_layer(ParamBinding& bind, Var x, const GatedLayerParams& layer) {
  if (x.cols() != layer.in()) {
    throw ShapeError("gated_layer: input has " + std::to_string(x.cols()) + " columns, layer expects " +
                     std::to_string(layer.in()));
  }
  Var linear = ops::add_row(ops::matmul(x, bind(layer.W)), bind(layer.b));
  if (!layer.gated) return ops::tanh(linear);
  Var gate = ops::sigmoid(ops::add_row(ops::matmul(x, bind(layer.V)), bind(layer.c)));
  return ops::mul(linear, gate);
}

Var trunk(ParamBinding& bind, Var x, std::span<const GatedLayerParams> layers) {
  for (const auto& layer : layers) x = gated_layer(bind, x, layer);
  return x;
}

GaussVars gaussian_head(ParamBinding& bind, Var h, const GaussianHeadParams& head) {
  Var mean = ops::add_row(ops::matmul(h, bind(head.mean_W)), bind(head.mean_b));
  Var log_var = ops::add_row(ops::matmul(h, bind(head.log_var_W)), bind(head.log_var_b));
  return {mean, ops::clamp(log_var, kLogVarMin, kLogVarMax)};
}

Var normalize_input(Var x) { return ops::l2_normalize_rows(x); }

GaussVars encode_z2(ParamBinding& bind, Var x_normalized) {
  const ModelParams& p = bind.params();
  return gaussian_head(bind, trunk(bind, x_normalized, p.encoder_z2), p.head_z2);
}

GaussVars encode_z1(ParamBinding& bind, Var x_normalized, Var z2) {
  const ModelParams& p = bind.params();
  if (!p.config.two_level()) throw ConfigError("encode_z1 called on a flat model");
  Var features = gated_layer(bind, x_normalized, p.encoder_z1.front());
  Var h = ops::concat_cols(features, z2);
  h = trunk(bind, h, std::span(p.encoder_z1).subspan(1));
  return gaussian_head(bind, h, p.head_z1);
}

GaussVars prior_z1(ParamBinding& bind, Var z2) {
  const ModelParams& p = bind.params();
  if (!p.config.two_level()) throw ConfigError("prior_z1 called on a flat model");
  return gaussian_head(bind, trunk(bind, z2, p.prior_z1), p.head_prior_z1);
}

Var decode(ParamBinding& bind, Var z1, std::optional<Var> z2) {
  const ModelParams& p = bind.params();
  if (p.config.two_level() != z2.has_value()) {
    throw ConfigError(p.config.two_level() ? "decode: two-level model needs both z1 and z2"
                                           : "decode: flat model takes a single latent");
  }
  Var input = z2 ? ops::concat_cols(z1, *z2) : z1;
  if (input.cols() != p.decoder.front().in()) {
    throw ConfigError("decode: latent width " + std::to_string(input.cols()) +
                      " does not match decoder input " + std::to_string(p.decoder.front().in()));
  }
  Var h = trunk(bind, input, p.decoder);
  return ops::add_row(ops::matmul(h, bind(p.out_W)), bind(p.out_b));
}

Var reparameterize(const GaussVars& g, Var noise) {
  return ops::add(g.mean, ops::mul(ops::exp(ops::scale(g.log_var, 0.5)), noise));
}

Var log_likelihood_rows(Var logits, Var x, Likelihood likelihood) {
  if (likelihood == Likelihood::multinomial) {
    return ops::row_sums(ops::mul(x, ops::log_softmax_rows(logits)));
  }
  Tape& t = logits.tape();
  Matrix not_x = x.value();
  for (double& v : not_x.values()) v = 1.0 - v;
  Var on = ops::mul(x, ops::log_sigmoid(logits));
  Var off = ops::mul(t.constant(std::move(not_x)), ops::log_sigmoid(ops::scale(logits, -1.0)));
  return ops::row_sums(ops::add(on, off));
}

Var kl_diag_gauss_rows(const GaussVars& q, const GaussVars& p) {
  // exp(lv_q - lv_p) rather than var_q / var_p: exactly 1 when q == p
  Var log_ratio = ops::sub(q.log_var, p.log_var);
  Var mahal = ops::mul(ops::square(ops::sub(q.mean, p.mean)), ops::exp(ops::scale(p.log_var, -1.0)));
  Var terms = ops::add_scalar(ops::sub(ops::add(ops::exp(log_ratio), mahal), log_ratio), -1.0);
  return ops::scale(ops::row_sums(terms), 0.5);
}

Var kl_standard_normal_rows(const GaussVars& q) {
  Var terms = ops::sub(ops::add(ops::exp(q.log_var), ops::square(q.mean)), q.log_var);
  return ops::scale(ops::row_sums(ops::add_scalar(terms, -1.0)), 0.5);
}

Var gauss_log_pdf_rows(Var z, const GaussVars& g) {
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  Var mahal = ops::mul(ops::square(ops::sub(z, g.mean)), ops::exp(ops::scale(g.log_var, -1.0)));
  Var terms = ops::add_scalar(ops::add(g.log_var, mahal), log_2pi);
  return ops::scale(ops::row_sums(terms), -0.5);
}

Var vamp_log_density_rows(ParamBinding& bind, Var z) {
  const ModelParams& p = bind.params();
  if (!p.config.vamp() || p.pseudo_inputs.rows() == 0) {
    throw ConfigError("vamp_log_density requires the vamp prior with K >= 1");
  }
  GaussVars components = encode_z2(bind, normalize_input(bind(p.pseudo_inputs)));
  Var log_pdf = ops::pairwise_gauss_log_pdf(z, components.mean, components.log_var);
  const double log_k = std::log(static_cast<double>(p.pseudo_inputs.rows()));
  return ops::add_scalar(ops::logsumexp_rows(log_pdf), -log_k);
}

ElboNoise draw_noise(const ModelConfig& config, std::size_t rows, Mode mode, double dropout_rate,
                     Rng& rng) {
  ElboNoise noise;
  std::normal_distribution<double> normal(0.0, 1.0);
  noise.eps_z2 = Matrix(rows, config.latent_z2);
  for (double& v : noise.eps_z2.values()) v = normal(rng);
  if (config.two_level()) {
    noise.eps_z1 = Matrix(rows, config.latent_z1);
    for (double& v : noise.eps_z1.values()) v = normal(rng);
  }
  if (mode == Mode::train && dropout_rate > 0.0) {
    if (dropout_rate >= 1.0) throw ConfigError("dropout rate must lie in [0, 1)");
    std::bernoulli_distribution keep(1.0 - dropout_rate);
    const double kept = 1.0 / (1.0 - dropout_rate);
    noise.dropout_scale = Matrix(rows, config.n_items);
    for (double& v : noise.dropout_scale.values()) v = keep(rng) ? kept : 0.0;
  }
  return noise;
}

ElboGraph build_elbo(ParamBinding& bind, const Matrix& x, double beta, const ElboNoise& noise) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  const ModelParams& p = bind.params();
  const ModelConfig& cfg = p.config;
  if (x.cols() != cfg.n_items) {
    throw ShapeError("elbo: input has " + std::to_string(x.cols()) + " items, model expects " +
                     std::to_string(cfg.n_items));
  }
  if (noise.eps_z2.rows() != x.rows()) throw ShapeError("elbo: noise rows differ from batch rows");
  Tape& t = bind.tape();

  Var xv = t.constant_ref(x);
  Var input = xv;
  if (!noise.dropout_scale.empty()) {
    require_same_shape(x, noise.dropout_scale, "elbo dropout");
    Matrix dropped = x;
    for (std::size_t i = 0; i < dropped.size(); ++i) dropped[i] *= noise.dropout_scale[i];
    input = t.constant(std::move(dropped));
  }
  Var xn = normalize_input(input);

  GaussVars q2 = encode_z2(bind, xn);
  Var z2 = reparameterize(q2, t.constant_ref(noise.eps_z2));

  ElboGraph g;
  Var logits;
  if (cfg.two_level()) {
    GaussVars q1 = encode_z1(bind, xn, z2);
    Var z1 = reparameterize(q1, t.constant_ref(noise.eps_z1));
    GaussVars p1 = prior_z1(bind, z2);
    logits = decode(bind, z1, z2);
    g.kl_z1_rows = kl_diag_gauss_rows(q1, p1);
    g.kl_z2_rows = ops::sub(gauss_log_pdf_rows(z2, q2), vamp_log_density_rows(bind, z2));
  } else {
    logits = decode(bind, z2, std::nullopt);
    g.kl_z1_rows = t.constant(Matrix(x.rows(), 1));
    g.kl_z2_rows = cfg.vamp() ? ops::sub(gauss_log_pdf_rows(z2, q2), vamp_log_density_rows(bind, z2))
                              : kl_standard_normal_rows(q2);
  }
  g.recon_rows = log_likelihood_rows(logits, xv, cfg.likelihood);
  g.elbo_rows = ops::sub(g.recon_rows, ops::scale(ops::add(g.kl_z1_rows, g.kl_z2_rows), beta));
  g.loss = ops::scale(ops::sum(g.elbo_rows), -1.0 / static_cast<double>(x.rows()));
  return g;
}

}  // namespace vampcf::model::graph
