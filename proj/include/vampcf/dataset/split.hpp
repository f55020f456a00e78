#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vampcf/dataset/ingest.hpp"
#include "vampcf/dataset/interactions.hpp"

namespace vampcf::dataset {

struct HeldoutUser {
  InteractionVector fold_in;
  InteractionVector heldout;
};

struct SplitOptions {
  std::size_t n_heldout_users = 0;
  double fold_in_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct SplitDiagnostics {
  std::size_t dropped_out_of_vocab_items = 0;
  std::size_t discarded_empty_fold_in = 0;
  std::size_t discarded_empty_heldout = 0;
};

/// Strong-generalization split. User indices are global: training users
/// first, then validation, then test, each block in user_id order.
struct DatasetSplit {
  std::vector<std::string> vocabulary;  // item index -> item id
  std::vector<InteractionVector> train;
  std::vector<HeldoutUser> validation;
  std::vector<HeldoutUser> test;

  SplitOptions options;
  std::optional<IngestOptions> ingest;  // recorded in meta.json when known
  SplitDiagnostics diagnostics;

  std::size_t n_items() const { return vocabulary.size(); }
  std::size_t n_users() const { return train.size() + validation.size() + test.size(); }
  /// Hex FNV-1a digest of the item vocabulary.
  std::string fingerprint() const;
};

/// Hex FNV-1a digest of an ordered item vocabulary.
std::string vocabulary_fingerprint(const std::vector<std::string>& vocabulary);

/// Number of fold-in items for a history of n items: ceil(fraction * n).
std::size_t fold_in_count(std::size_t n, double fraction);

/// Samples disjoint validation and test user sets of n_heldout_users each,
/// builds the vocabulary from the remaining training users and partitions
/// each heldout history into fold-in / heldout parts. Pure in (users, options).
DatasetSplit split(const std::vector<UserHistory>& users, const SplitOptions& options);

/// Writes vocab.csv, train.csv, {validation,test}_{tr,te}.csv and meta.json
/// into `dir`. Files are staged in `<dir>.partial` and renamed on success.
void write_split(const DatasetSplit& split, const std::filesystem::path& dir);
DatasetSplit read_split(const std::filesystem::path& dir);

}  // namespace vampcf::dataset
