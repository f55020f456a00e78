#include "vampcf/dataset/interactions.hpp"

#include "vampcf/error.hpp"

namespace vampcf::dataset {

void validate(const InteractionVector& v, std::size_t n_items) {
  for (std::size_t i = 0; i < v.items.size(); ++i) {
    if (v.items[i] >= n_items) {
      throw DataError("user " + std::to_string(v.user) + ": item index " +
                      std::to_string(v.items[i]) + " >= " + std::to_string(n_items));
    }
    if (i > 0 && v.items[i] <= v.items[i - 1]) {
      throw DataError("user " + std::to_string(v.user) + ": item indices not strictly increasing");
    }
  }
}

numcore::Matrix to_dense(const InteractionVector& v, std::size_t n_items) {
  const InteractionVector* row = &v;
  return to_dense(std::span<const InteractionVector* const>(&row, 1), n_items);
}

numcore::Matrix to_dense(std::span<const InteractionVector* const> rows, std::size_t n_items) {
  numcore::Matrix dense(rows.size(), n_items);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::uint32_t item : rows[r]->items) {
      if (item >= n_items) {
        throw ShapeError("to_dense: item index " + std::to_string(item) + " >= " +
                         std::to_string(n_items));
      }
      dense(r, item) = 1.0;
    }
  }
  return dense;
}

InteractionVector from_dense(const numcore::Matrix& dense, std::size_t r, std::size_t user) {
  InteractionVector v{user, {}};
  for (std::size_t c = 0; c < dense.cols(); ++c)
    if (dense(r, c) != 0.0) v.items.push_back(static_cast<std::uint32_t>(c));
  return v;
}

}  // namespace vampcf::dataset
