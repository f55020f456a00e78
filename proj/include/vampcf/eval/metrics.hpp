#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vampcf::eval {

/// Items ranked by descending score, ties broken by ascending index,
/// with every masked item excluded. Returns at most k indices.
std::vector<std::uint32_t> top_k(std::span<const double> scores,
                                 std::span<const std::uint32_t> mask, std::size_t k);

// Ranking metrics over sorted index sets. Both return nullopt (skip the
// user) when `heldout` is empty; K must be >= 1.
std::optional<double> ndcg_at_k(std::span<const double> scores,
                                std::span<const std::uint32_t> heldout,
                                std::span<const std::uint32_t> mask, std::size_t k);
std::optional<double> recall_at_k(std::span<const double> scores,
                                  std::span<const std::uint32_t> heldout,
                                  std::span<const std::uint32_t> mask, std::size_t k);

/// Metrics from an already computed ranking (as returned by top_k).
double ndcg_from_ranking(std::span<const std::uint32_t> ranking,
                         std::span<const std::uint32_t> heldout, std::size_t k);
double recall_from_ranking(std::span<const std::uint32_t> ranking,
                           std::span<const std::uint32_t> heldout, std::size_t k);

}  // namespace vampcf::eval
