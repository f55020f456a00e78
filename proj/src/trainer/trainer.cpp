#include "vampcf/trainer/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "vampcf/error.hpp"
#include "vampcf/eval/evaluate.hpp"

namespace vampcf::trainer {

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("train: batch_size must be positive");
  if (max_epochs == 0) throw ConfigError("train: max_epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train: learning_rate must be positive");
  }
  if (!(beta_cap >= 0.0 && beta_cap <= 1.0)) {
    throw ConfigError("train: beta_cap must lie in [0, 1] (beta scales the KL term)");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("train: dropout must lie in [0, 1)");
  }
  if (eval_k == 0) throw ConfigError("train: eval_k must be at least 1");
}

double beta_at(std::uint64_t step, const TrainConfig& config) {
  const double steps = static_cast<double>(std::max<std::size_t>(1, config.anneal_steps));
  return std::min(config.beta_cap, config.beta_cap * static_cast<double>(step) / steps);
}

std::size_t resolved_anneal_steps(const TrainConfig& config, std::size_t n_train_users) {
  if (config.anneal_steps > 0) return config.anneal_steps;
  const std::size_t batches = (n_train_users + config.batch_size - 1) / config.batch_size;
  return std::max<std::size_t>(1, 20 * batches);
}

std::string to_json_line(const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["mean_elbo"] = r.mean_elbo;
  j["mean_recon"] = r.mean_recon;
  j["mean_kl_z1"] = r.mean_kl_z1;
  j["mean_kl_z2"] = r.mean_kl_z2;
  j["beta"] = r.beta;
  j["val_metric"] = r.val_metric;
  j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

model::ElboTerms train_step(model::ModelParams& params, OptimizerState& state,
                            const numcore::Matrix& batch, double beta, double learning_rate,
                            double dropout_rate, model::Rng& rng) {
  const auto noise = model::graph::draw_noise(params.config, batch.rows(), model::Mode::train,
                                              dropout_rate, rng);
  model::ModelParams grads = model::ModelParams::zeros(params.config);
  model::ElboTerms terms;
  const double loss = model::loss_and_gradient(batch, params, beta, noise, &grads, &terms);
  if (!std::isfinite(loss)) {
    throw NumericalError("non-finite loss at step " + std::to_string(state.step + 1));
  }
  adam_step(params, grads, state, learning_rate);
  return terms;
}

TrainResult train(const dataset::DatasetSplit& split, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainCallbacks& callbacks) {
  config.validate();
  model_config.validate();
  if (split.train.empty()) throw ConfigError("train: the split has no training users");
  if (split.validation.empty()) throw ConfigError("train: the split has no validation users");
  if (model_config.n_items != split.n_items()) {
    throw ConfigError("train: model M differs from the split vocabulary size");
  }

  TrainConfig cfg = config;
  cfg.anneal_steps = resolved_anneal_steps(config, split.train.size());

  model::Rng init_rng(cfg.seed);
  model::Rng shuffle_rng(cfg.seed + 1);
  model::Rng noise_rng(cfg.seed + 2);

  model::ModelParams params = model::initialize(model_config, split.train, init_rng);
  OptimizerState state = make_optimizer_state(params);

  TrainResult result;
  result.best = params;
  result.best_metric = -1.0;
  const std::size_t ks[] = {cfg.eval_k};
  std::size_t since_improvement = 0;

  std::vector<std::size_t> order(split.train.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    EpochRecord record;
    record.epoch = epoch;
    double users_seen = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<const dataset::InteractionVector*> rows;
      for (std::size_t i = start; i < end; ++i) rows.push_back(&split.train[order[i]]);
      const numcore::Matrix batch = dataset::to_dense(rows, split.n_items());

      const double beta = beta_at(state.step, cfg);
      if (beta > cfg.beta_cap || beta > 1.0) throw Error("beta schedule exceeded beta_cap");
      model::ElboTerms terms;
      try {
        terms = train_step(params, state, batch, beta, cfg.learning_rate, cfg.dropout_rate,
                           noise_rng);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " (epoch " + std::to_string(epoch) +
                             "; best checkpoint from epoch " + std::to_string(result.best_epoch) +
                             " retained)");
      }
      const double w = static_cast<double>(rows.size());
      record.mean_elbo += w * terms.elbo;
      record.mean_recon += w * terms.recon;
      record.mean_kl_z1 += w * terms.kl_z1;
      record.mean_kl_z2 += w * terms.kl_z2;
      record.beta = beta;
      users_seen += w;
    }
    record.mean_elbo /= users_seen;
    record.mean_recon /= users_seen;
    record.mean_kl_z1 /= users_seen;
    record.mean_kl_z2 /= users_seen;

    const eval::MetricReport report =
        eval::evaluate(split.validation, split.n_items(), params, ks);
    record.val_metric = report.rows.front().mean;
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.log.push_back(record);
    if (callbacks.on_epoch) callbacks.on_epoch(record);

    if (record.val_metric > result.best_metric) {
      result.best_metric = record.val_metric;
      result.best_epoch = epoch;
      result.best = params;
      since_improvement = 0;
      if (callbacks.on_improvement) callbacks.on_improvement(params, record);
    } else {
      ++since_improvement;
    }
    if (since_improvement >= cfg.patience) break;
  }
  result.steps = state.step;
  return result;
}

}  // namespace vampcf::trainer
