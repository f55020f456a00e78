#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "vampcf/dataset/split.hpp"
#include "vampcf/error.hpp"

namespace vampcf::dataset {

std::string vocabulary_fingerprint(const std::vector<std::string>& vocabulary) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (const std::string& id : vocabulary) {
    for (unsigned char ch : id) mix(ch);
    mix(0);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

std::string DatasetSplit::fingerprint() const { return vocabulary_fingerprint(vocabulary); }

std::size_t fold_in_count(std::size_t n, double fraction) {
  // The small slack keeps exact products such as 0.8 * 10 from rounding up.
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

DatasetSplit split(const std::vector<UserHistory>& users, const SplitOptions& options) {
  if (!(options.fold_in_fraction > 0.0 && options.fold_in_fraction < 1.0)) {
    throw ConfigError("fold_in_fraction must lie strictly between 0 and 1");
  }
  if (2 * options.n_heldout_users >= users.size()) {
    throw ConfigError("2 * n_heldout_users (" + std::to_string(2 * options.n_heldout_users) +
                      ") must be smaller than the number of users (" +
                      std::to_string(users.size()) + ")");
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n = options.n_heldout_users;
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + n);
  std::vector<std::size_t> test_idx(order.begin() + n, order.begin() + 2 * n);
  std::vector<std::size_t> train_idx(order.begin() + 2 * n, order.end());
  for (auto* group : {&val_idx, &test_idx, &train_idx}) std::sort(group->begin(), group->end());

  DatasetSplit out;
  out.options = options;

  for (std::size_t u : train_idx)
    for (const std::string& item : users[u].items) out.vocabulary.push_back(item);
  std::sort(out.vocabulary.begin(), out.vocabulary.end());
  out.vocabulary.erase(std::unique(out.vocabulary.begin(), out.vocabulary.end()),
                       out.vocabulary.end());
  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(out.vocabulary.size());
  for (std::size_t i = 0; i < out.vocabulary.size(); ++i)
    index.emplace(out.vocabulary[i], static_cast<std::uint32_t>(i));

  std::size_t next_user = 0;
  for (std::size_t u : train_idx) {
    InteractionVector v{next_user++, {}};
    for (const std::string& item : users[u].items) v.items.push_back(index.at(item));
    std::sort(v.items.begin(), v.items.end());
    out.train.push_back(std::move(v));
  }

  auto partition = [&](const std::vector<std::size_t>& group, std::vector<HeldoutUser>& dest) {
    for (std::size_t u : group) {
      const auto& items = users[u].items;
      std::vector<std::size_t> pick(items.size());
      std::iota(pick.begin(), pick.end(), 0);
      std::shuffle(pick.begin(), pick.end(), rng);
      const std::size_t n_fold = fold_in_count(items.size(), options.fold_in_fraction);

      HeldoutUser h;
      for (std::size_t j = 0; j < pick.size(); ++j) {
        const auto it = index.find(items[pick[j]]);
        if (it == index.end()) {
          ++out.diagnostics.dropped_out_of_vocab_items;
          continue;
        }
        (j < n_fold ? h.fold_in : h.heldout).items.push_back(it->second);
      }
      if (h.fold_in.items.empty()) {
        ++out.diagnostics.discarded_empty_fold_in;
        continue;
      }
      if (h.heldout.items.empty()) {
        ++out.diagnostics.discarded_empty_heldout;
        continue;
      }
      std::sort(h.fold_in.items.begin(), h.fold_in.items.end());
      std::sort(h.heldout.items.begin(), h.heldout.items.end());
      h.fold_in.user = h.heldout.user = next_user++;
      dest.push_back(std::move(h));
    }
  };
  partition(val_idx, out.validation);
  partition(test_idx, out.test);
  return out;
}

}  // namespace vampcf::dataset
