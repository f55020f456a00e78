#include "synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

namespace vampcf::testing {

namespace {

std::string padded(char prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%05zu", prefix, i);
  return buf;
}

}  // namespace

std::vector<dataset::UserHistory> archetype_users(const ArchetypeOptions& o) {
  std::mt19937_64 rng(o.seed);
  const std::size_t block = o.items / o.archetypes;
  std::vector<double> zipf(block);
  for (std::size_t r = 0; r < block; ++r) zipf[r] = 1.0 / static_cast<double>(r + 1);

  std::uniform_int_distribution<std::size_t> pick_archetype(0, o.archetypes - 1);
  std::uniform_int_distribution<std::size_t> pick_size(o.min_items, o.max_items);
  std::uniform_int_distribution<std::size_t> pick_any(0, o.items - 1);
  std::discrete_distribution<std::size_t> pick_rank(zipf.begin(), zipf.end());
  std::bernoulli_distribution on_signal(o.signal);

  std::vector<dataset::UserHistory> users;
  users.reserve(o.users);
  for (std::size_t u = 0; u < o.users; ++u) {
    const std::size_t a = pick_archetype(rng);
    const std::size_t n = pick_size(rng);
    std::set<std::size_t> items;
    while (items.size() < n) {
      items.insert(on_signal(rng) ? a * block + pick_rank(rng) : pick_any(rng));
    }
    dataset::UserHistory h{padded('u', u), {}};
    for (std::size_t i : items) h.items.push_back(padded('i', i));
    std::sort(h.items.begin(), h.items.end());
    users.push_back(std::move(h));
  }
  return users;
}

dataset::DatasetSplit archetype_split(const ArchetypeOptions& options,
                                      std::size_t heldout_users) {
  return dataset::split(archetype_users(options), {heldout_users, 0.8, options.seed});
}

}  // namespace vampcf::testing
