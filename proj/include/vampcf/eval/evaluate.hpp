#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vampcf/dataset/split.hpp"
#include "vampcf/model/params.hpp"
#include "vampcf/numcore/matrix.hpp"

namespace vampcf::eval {

struct MetricRow {
  std::string metric;  // "NDCG" or "Recall"
  std::size_t k = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample stdev / sqrt(users)
  std::size_t users = 0;
};

struct UserMetric {
  std::size_t user = 0;
  std::string metric;
  std::size_t k = 0;
  double value = 0.0;
};

struct MetricReport {
  std::vector<MetricRow> rows;  // NDCG@k for every k, then Recall@k
  std::size_t evaluated_users = 0;
  std::size_t skipped_users = 0;  // empty heldout; not scored as zero
  std::string fingerprint;        // model / vocabulary identification
  std::vector<UserMetric> per_user;

  /// Throws std::out_of_range when the row is absent.
  const MetricRow& at(const std::string& metric, std::size_t k) const;
};

/// Maps a batch of dense fold-in rows to a batch of item scores.
using Scorer = std::function<numcore::Matrix(const numcore::Matrix& fold_in)>;

struct EvalOptions {
  std::size_t batch_size = 256;
  bool parallel = true;  // per-user metrics over OpenMP threads
  bool keep_per_user = false;
  std::string fingerprint;
};

/// Scores every user's fold-in set, masks the fold-in items and computes
/// NDCG@k and Recall@k against the heldout set. Aggregation runs in user
/// order, so the report does not depend on the thread count.
MetricReport evaluate_scores(std::span<const dataset::HeldoutUser> users, std::size_t n_items,
                             std::span<const std::size_t> ks, const Scorer& scorer,
                             const EvalOptions& options = {});

/// evaluate_scores with the model's fold-in scoring. ConfigError when the
/// model's M differs from n_items.
MetricReport evaluate(std::span<const dataset::HeldoutUser> users, std::size_t n_items,
                      const model::ModelParams& params, std::span<const std::size_t> ks,
                      const EvalOptions& options = {});

/// Training consumption count per item.
std::vector<double> popularity_baseline(std::span<const dataset::InteractionVector> train,
                                        std::size_t n_items);

}  // namespace vampcf::eval
