#include "vampcf/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <cstdint>
#include <stdexcept>

#include "vampcf/error.hpp"
#include "vampcf/eval/metrics.hpp"
#include "vampcf/model/model.hpp"

namespace vampcf::eval {

const MetricRow& MetricReport::at(const std::string& metric, std::size_t k) const {
  for (const MetricRow& r : rows)
    if (r.metric == metric && r.k == k) return r;
  throw std::out_of_range("no " + metric + "@" + std::to_string(k) + " in report");
}

namespace {

// values[user][2 * ki + {0: ndcg, 1: recall}]
void score_user(std::span<const double> scores, const dataset::HeldoutUser& u,
                std::span<const std::size_t> ks, std::size_t max_k, std::span<double> out) {
  for (double s : scores) {
    if (std::isnan(s)) throw NumericalError("evaluate: NaN score for user " + std::to_string(u.fold_in.user));
  }
  const auto ranking = top_k(scores, u.fold_in.items, max_k);
  for (std::uint32_t item : ranking) {
    if (std::binary_search(u.fold_in.items.begin(), u.fold_in.items.end(), item)) {
      throw Error("evaluate: fold-in item ranked for user " + std::to_string(u.fold_in.user));
    }
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out[2 * i] = ndcg_from_ranking(ranking, u.heldout.items, ks[i]);
    out[2 * i + 1] = recall_from_ranking(ranking, u.heldout.items, ks[i]);
  }
}

}  // namespace

MetricReport evaluate_scores(std::span<const dataset::HeldoutUser> users, std::size_t n_items,
                             std::span<const std::size_t> ks, const Scorer& scorer,
                             const EvalOptions& options) {
  if (ks.empty()) throw ConfigError("evaluate: no cutoffs requested");
  std::size_t max_k = 0;
  for (std::size_t k : ks) {
    if (k == 0) throw ConfigError("evaluate: K must be at least 1");
    max_k = std::max(max_k, k);
  }
  const std::size_t n_values = 2 * ks.size();

  std::vector<const dataset::HeldoutUser*> active;
  MetricReport report;
  report.fingerprint = options.fingerprint;
  for (const auto& u : users) {
    if (u.heldout.items.empty()) {
      ++report.skipped_users;
    } else {
      active.push_back(&u);
    }
  }

  std::vector<double> values(active.size() * n_values);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t start = 0; start < active.size(); start += batch) {
    const std::size_t end = std::min(active.size(), start + batch);
    std::vector<const dataset::InteractionVector*> rows;
    for (std::size_t i = start; i < end; ++i) rows.push_back(&active[i]->fold_in);
    const numcore::Matrix scores = scorer(dataset::to_dense(rows, n_items));
    if (scores.rows() != rows.size() || scores.cols() != n_items) {
      throw ShapeError("evaluate: scorer returned " + scores.shape_string());
    }

    const auto n = static_cast<std::int64_t>(end - start);
    if (options.parallel) {
      // Exceptions must not escape an OpenMP region; surface the first one.
      std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
      for (std::int64_t i = 0; i < n; ++i) {
        try {
          const std::size_t u = start + static_cast<std::size_t>(i);
          score_user(scores.row(static_cast<std::size_t>(i)), *active[u], ks, max_k,
                     std::span(values).subspan(u * n_values, n_values));
        } catch (...) {
#pragma omp critical
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    } else {
      for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t u = start + static_cast<std::size_t>(i);
        score_user(scores.row(static_cast<std::size_t>(i)), *active[u], ks, max_k,
                   std::span(values).subspan(u * n_values, n_values));
      }
    }
  }

  report.evaluated_users = active.size();
  const double n = static_cast<double>(active.size());
  for (int metric = 0; metric < 2; ++metric) {
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      MetricRow row{metric == 0 ? "NDCG" : "Recall", ks[ki], 0.0, 0.0, active.size()};
      double sum = 0.0;
      double sq = 0.0;
      for (std::size_t u = 0; u < active.size(); ++u) {
        const double v = values[u * n_values + 2 * ki + static_cast<std::size_t>(metric)];
        if (!(v >= 0.0 && v <= 1.0)) {
          throw NumericalError("evaluate: " + row.metric + " outside [0, 1]");
        }
        sum += v;
        if (options.keep_per_user) {
          report.per_user.push_back({active[u]->fold_in.user, row.metric, ks[ki], v});
        }
      }
      if (active.empty()) {
        report.rows.push_back(row);
        continue;
      }
      row.mean = sum / n;
      for (std::size_t u = 0; u < active.size(); ++u) {
        const double d = values[u * n_values + 2 * ki + static_cast<std::size_t>(metric)] - row.mean;
        sq += d * d;
      }
      row.std_error = active.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

MetricReport evaluate(std::span<const dataset::HeldoutUser> users, std::size_t n_items,
                      const model::ModelParams& params, std::span<const std::size_t> ks,
                      const EvalOptions& options) {
  if (params.config.n_items != n_items) {
    throw ConfigError("evaluate: model has M=" + std::to_string(params.config.n_items) +
                      " but the split vocabulary has " + std::to_string(n_items) + " items");
  }
  return evaluate_scores(users, n_items, ks,
                         [&params](const numcore::Matrix& x) { return model::score(x, params); },
                         options);
}

std::vector<double> popularity_baseline(std::span<const dataset::InteractionVector> train,
                                        std::size_t n_items) {
  std::vector<double> counts(n_items, 0.0);
  for (const auto& v : train) {
    for (std::uint32_t item : v.items) {
      if (item >= n_items) throw ShapeError("popularity_baseline: item index out of range");
      counts[item] += 1.0;
    }
  }
  return counts;
}

}  // namespace vampcf::eval
