#include "vampcf/cli/gradcheck_grid.hpp"

#include <algorithm>
#include <random>

#include "vampcf/model/model.hpp"
#include "vampcf/numcore/gradcheck.hpp"

namespace vampcf::cli {

std::vector<model::ModelConfig> gradcheck_grid() {
  std::vector<model::ModelConfig> grid;
  for (auto prior : {model::PriorKind::standard, model::PriorKind::vamp})
    for (auto hierarchy : {model::Hierarchy::flat, model::Hierarchy::two_level})
      for (bool gated : {false, true})
        for (auto likelihood : {model::Likelihood::multinomial, model::Likelihood::bernoulli}) {
          model::ModelConfig c;
          c.prior = prior;
          c.hierarchy = hierarchy;
          c.gated = gated;
          c.likelihood = likelihood;
          c.depth = 1;
          c.hidden = 16;
          c.latent_z1 = 4;
          c.latent_z2 = 4;
          c.n_pseudo = 3;
          c.n_items = 30;
          if (c.two_level() && !c.vamp()) continue;
          grid.push_back(c);
        }
  return grid;
}

std::string cell_name(const model::ModelConfig& c) {
  return std::string(to_string(c.prior)) + "/" + std::string(to_string(c.hierarchy)) + "/" +
         (c.gated ? "gated" : "ungated") + "/" + std::string(to_string(c.likelihood));
}

GradcheckResult check_model_gradients(const model::ModelConfig& config, std::uint64_t seed,
                                      double eps, double tolerance, bool corrupt) {
  model::Rng rng(seed);
  constexpr std::size_t kUsers = 4;

  // Random histories of 3-8 items.
  std::vector<dataset::InteractionVector> users;
  std::uniform_int_distribution<std::size_t> count(3, 8);
  for (std::size_t u = 0; u < kUsers; ++u) {
    std::vector<std::uint32_t> all(config.n_items);
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count(rng));
    std::sort(all.begin(), all.end());
    users.push_back({u, all});
  }
  std::vector<const dataset::InteractionVector*> rows;
  for (const auto& u : users) rows.push_back(&u);
  const numcore::Matrix x = dataset::to_dense(rows, config.n_items);

  model::ModelParams params = model::initialize(config, users, rng);
  std::normal_distribution<double> small(0.0, 0.1);
  for (auto& t : params.tensors()) {
    if (t.value->rows() == 1) {
      for (double& v : t.value->values()) v = small(rng);
    }
  }
  const auto noise = model::graph::draw_noise(config, x.rows(), model::Mode::eval, 0.0, rng);
  constexpr double kBeta = 0.7;

  model::ModelParams grads = model::ModelParams::zeros(config);
  model::loss_and_gradient(x, params, kBeta, noise, &grads, nullptr);
  if (corrupt) grads.out_b[0] += 1.0;

  GradcheckResult result;
  result.cell = cell_name(config);
  model::ModelParams work = params;
  auto work_tensors = work.tensors();
  const auto grad_tensors = grads.tensors();
  for (std::size_t i = 0; i < work_tensors.size(); ++i) {
    numcore::Matrix& slot = *work_tensors[i].value;
    const numcore::Matrix original = slot;
    const double err = numcore::grad_check(
        [&](const numcore::Matrix& probe) {
          slot = probe;
          return model::loss_and_gradient(x, work, kBeta, noise, nullptr, nullptr);
        },
        original, *grad_tensors[i].value, eps);
    slot = original;
    if (err >= result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_tensor = work_tensors[i].name;
    }
  }
  result.passed = result.max_rel_error < tolerance;
  return result;
}

}  // namespace vampcf::cli
