#include "vampcf/model/params.hpp"

#include <cmath>

#include "vampcf/error.hpp"

namespace vampcf::model {

namespace {

GatedLayerParams make_layer(std::size_t in, std::size_t out, bool gated) {
  GatedLayerParams p;
  p.W = Matrix(in, out);
  p.b = Matrix(1, out);
  if (gated) {
    p.V = Matrix(in, out);
    p.c = Matrix(1, out);
  }
  p.gated = gated;
  return p;
}

GaussianHeadParams make_head(std::size_t in, std::size_t out) {
  return {Matrix(in, out), Matrix(1, out), Matrix(in, out), Matrix(1, out)};
}

std::vector<GatedLayerParams> make_trunk(std::size_t in, const ModelConfig& c) {
  std::vector<GatedLayerParams> layers;
  for (std::size_t l = 0; l < c.depth; ++l) {
    layers.push_back(make_layer(l == 0 ? in : c.hidden, c.hidden, c.gated));
  }
  return layers;
}

template <class Tensor, class Self>
std::vector<Tensor> collect(Self& p) {
  std::vector<Tensor> out;
  auto add = [&out](std::string name, auto& m) {
    if (!m.empty()) out.push_back({std::move(name), &m});
  };
  auto add_trunk = [&](const std::string& prefix, auto& layers) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string base = prefix + "." + std::to_string(l);
      add(base + ".W", layers[l].W);
      add(base + ".b", layers[l].b);
      add(base + ".V", layers[l].V);
      add(base + ".c", layers[l].c);
    }
  };
  auto add_head = [&](const std::string& prefix, auto& h) {
    add(prefix + ".mean_W", h.mean_W);
    add(prefix + ".mean_b", h.mean_b);
    add(prefix + ".log_var_W", h.log_var_W);
    add(prefix + ".log_var_b", h.log_var_b);
  };
  add_trunk("encoder_z2", p.encoder_z2);
  add_head("head_z2", p.head_z2);
  add_trunk("encoder_z1", p.encoder_z1);
  add_head("head_z1", p.head_z1);
  add_trunk("prior_z1", p.prior_z1);
  add_head("head_prior_z1", p.head_prior_z1);
  add_trunk("decoder", p.decoder);
  add("out.W", p.out_W);
  add("out.b", p.out_b);
  add("pseudo_inputs", p.pseudo_inputs);
  return out;
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& config) {
  config.validate();
  const ModelConfig& c = config;
  ModelParams p;
  p.config = c;

  p.encoder_z2 = make_trunk(c.n_items, c);
  p.head_z2 = make_head(c.hidden, c.latent_z2);

  std::size_t decoder_in = c.latent_z2;
  if (c.two_level()) {
    p.encoder_z1.push_back(make_layer(c.n_items, c.hidden, c.gated));
    for (std::size_t l = 1; l < c.depth; ++l) {
      p.encoder_z1.push_back(
          make_layer(l == 1 ? c.hidden + c.latent_z2 : c.hidden, c.hidden, c.gated));
    }
    p.head_z1 = make_head(c.depth == 1 ? c.hidden + c.latent_z2 : c.hidden, c.latent_z1);

    p.prior_z1 = make_trunk(c.latent_z2, c);
    p.head_prior_z1 = make_head(c.hidden, c.latent_z1);
    decoder_in = c.latent_z1 + c.latent_z2;
  }

  p.decoder = make_trunk(decoder_in, c);
  p.out_W = Matrix(c.hidden, c.n_items);
  p.out_b = Matrix(1, c.n_items);

  if (c.vamp()) p.pseudo_inputs = Matrix(c.n_pseudo, c.n_items);
  return p;
}

std::vector<NamedTensor> ModelParams::tensors() { return collect<NamedTensor>(*this); }

std::vector<ConstNamedTensor> ModelParams::tensors() const {
  return collect<ConstNamedTensor>(*this);
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.value->size();
  return n;
}

ModelParams initialize(const ModelConfig& config, std::span<const dataset::InteractionVector> train,
                       Rng& rng) {
  ModelParams p = ModelParams::zeros(config);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& [name, m] : p.tensors()) {
    if (name == "pseudo_inputs" || m->rows() == 1) continue;  // biases start at zero
    const double stdev = std::sqrt(2.0 / static_cast<double>(m->rows() + m->cols()));
    for (double& w : m->values()) w = stdev * normal(rng);
  }

  if (config.vamp()) {
    if (train.empty()) throw ConfigError("pseudo-input initialization needs training users");
    std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
    std::normal_distribution<double> jitter(0.0, 0.01);
    for (std::size_t k = 0; k < config.n_pseudo; ++k) {
      const auto& user = train[pick(rng)];
      auto row = p.pseudo_inputs.row(k);
      for (std::uint32_t item : user.items) {
        if (item >= config.n_items) throw DataError("training item index exceeds model M");
        row[item] = 1.0;
      }
      for (double& v : row) v += jitter(rng);
    }
  }
  return p;
}

}  // namespace vampcf::model
