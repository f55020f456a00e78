#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vampcf/dataset/split.hpp"
#include "vampcf/model/model.hpp"
#include "vampcf/trainer/adam.hpp"

namespace vampcf::trainer {

struct TrainConfig {
  std::size_t batch_size = 500;
  std::size_t max_epochs = 200;
  double learning_rate = 1e-3;
  double beta_cap = 0.2;
  std::size_t anneal_steps = 0;  // 0: the steps of the first 20 epochs
  double dropout_rate = 0.5;
  std::size_t patience = 10;
  std::uint64_t seed = 0;
  std::size_t eval_k = 100;  // early stopping on validation NDCG@eval_k

  /// Throws ConfigError on out-of-range values (beta_cap outside [0, 1], ...).
  void validate() const;
};

/// Linear warm-up from 0 to beta_cap over anneal_steps, then constant.
double beta_at(std::uint64_t step, const TrainConfig& config);

/// anneal_steps, or 20 epochs' worth of minibatches when it is 0.
std::size_t resolved_anneal_steps(const TrainConfig& config, std::size_t n_train_users);

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_elbo = 0.0;
  double mean_recon = 0.0;
  double mean_kl_z1 = 0.0;
  double mean_kl_z2 = 0.0;
  double beta = 0.0;  // at the epoch's last step
  double val_metric = 0.0;
  double wall_seconds = 0.0;
};

/// {epoch, mean_elbo, mean_recon, mean_kl_z1, mean_kl_z2, beta, val_metric, wall_seconds}
std::string to_json_line(const EpochRecord& record);

/// One minibatch update: draws noise (dropout in train mode), computes
/// -mean ELBO and its gradient and applies adam_step. Returns the batch
/// ELBO terms. NumericalError on a non-finite loss or gradient.
model::ElboTerms train_step(model::ModelParams& params, OptimizerState& state,
                            const numcore::Matrix& batch, double beta, double learning_rate,
                            double dropout_rate, model::Rng& rng);

struct TrainCallbacks {
  std::function<void(const EpochRecord&)> on_epoch;
  /// Called with the parameters each time the validation metric improves.
  std::function<void(const model::ModelParams&, const EpochRecord&)> on_improvement;
};

struct TrainResult {
  model::ModelParams best;
  double best_metric = 0.0;
  std::size_t best_epoch = 0;
  std::uint64_t steps = 0;
  std::vector<EpochRecord> log;
};

/// Minibatch training with seeded shuffling, beta annealing and early
/// stopping on validation NDCG. Seeds derive from config.seed: +0 for
/// initialization, +1 for shuffling, +2 for sampling noise.
TrainResult train(const dataset::DatasetSplit& split, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainCallbacks& callbacks = {});

}  // namespace vampcf::trainer
