#include "vampcf/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vampcf/error.hpp"

namespace vampcf::eval {

namespace {

bool contains(std::span<const std::uint32_t> sorted, std::uint32_t item) {
  return std::binary_search(sorted.begin(), sorted.end(), item);
}

}  // namespace

std::vector<std::uint32_t> top_k(std::span<const double> scores,
                                 std::span<const std::uint32_t> mask, std::size_t k) {
  std::vector<std::uint32_t> candidates;
  candidates.reserve(scores.size());
  for (std::uint32_t i = 0; i < scores.size(); ++i) {
    if (!contains(mask, i)) candidates.push_back(i);
  }
  auto better = [&scores](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t n = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n),
                    candidates.end(), better);
  candidates.resize(n);
  return candidates;
}

double ndcg_from_ranking(std::span<const std::uint32_t> ranking,
                         std::span<const std::uint32_t> heldout, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) {
    if (contains(heldout, ranking[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  double idcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, heldout.size()); ++r) {
    idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg;
}

double recall_from_ranking(std::span<const std::uint32_t> ranking,
                           std::span<const std::uint32_t> heldout, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) {
    if (contains(heldout, ranking[r])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::min(k, heldout.size()));
}

std::optional<double> ndcg_at_k(std::span<const double> scores,
                                std::span<const std::uint32_t> heldout,
                                std::span<const std::uint32_t> mask, std::size_t k) {
  if (k == 0) throw DomainError("ndcg_at_k: K must be at least 1");
  if (heldout.empty()) return std::nullopt;
  return ndcg_from_ranking(top_k(scores, mask, k), heldout, k);
}

std::optional<double> recall_at_k(std::span<const double> scores,
                                  std::span<const std::uint32_t> heldout,
                                  std::span<const std::uint32_t> mask, std::size_t k) {
  if (k == 0) throw DomainError("recall_at_k: K must be at least 1");
  if (heldout.empty()) return std::nullopt;
  return recall_from_ranking(top_k(scores, mask, k), heldout, k);
}

}  // namespace vampcf::eval
