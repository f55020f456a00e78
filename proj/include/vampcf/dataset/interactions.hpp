#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vampcf/numcore/matrix.hpp"

namespace vampcf::dataset {

/// One user's binarized history: strictly increasing item indices.
struct InteractionVector {
  std::size_t user = 0;
  std::vector<std::uint32_t> items;

  std::size_t count() const { return items.size(); }
  friend bool operator==(const InteractionVector&, const InteractionVector&) = default;
};

/// Throws DataError unless items are strictly increasing and below n_items.
void validate(const InteractionVector& v, std::size_t n_items);

/// 1 x n_items 0/1 row with ones at v.items. Index >= n_items throws ShapeError.
numcore::Matrix to_dense(const InteractionVector& v, std::size_t n_items);

/// One 0/1 row per vector, in order.
numcore::Matrix to_dense(std::span<const InteractionVector* const> rows, std::size_t n_items);

/// Indices of the nonzero entries of row `r`.
InteractionVector from_dense(const numcore::Matrix& dense, std::size_t r = 0, std::size_t user = 0);

}  // namespace vampcf::dataset
