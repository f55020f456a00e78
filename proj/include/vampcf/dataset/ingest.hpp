#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace vampcf::dataset {

struct RatingRecord {
  std::string user_id;
  std::string item_id;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;  // parsed, never used by the model
};

/// A user's surviving items after binarization, sorted and unique.
struct UserHistory {
  std::string user_id;
  std::vector<std::string> items;

  friend bool operator==(const UserHistory&, const UserHistory&) = default;
};

struct IngestOptions {
  double min_rating = 4.0;
  std::size_t min_items = 5;
};

/// Parses `user_id,item_id,rating[,timestamp]` lines. A first line whose
/// rating field is not numeric is treated as a header. Tab-separated input
/// is accepted when a line contains no comma. `source` names the stream in
/// ParseError messages.
std::vector<RatingRecord> read_ratings(std::istream& in, const std::string& source = "<stream>");
std::vector<RatingRecord> read_ratings(const std::filesystem::path& path);

/// Keeps ratings >= min_rating, deduplicates (user, item), drops users left
/// with fewer than min_items. Output is sorted by user_id then item_id.
/// Throws DataError when no user survives.
std::vector<UserHistory> binarize(const std::vector<RatingRecord>& records,
                                  const IngestOptions& options);

std::vector<UserHistory> ingest(const std::filesystem::path& path, const IngestOptions& options);

}  // namespace vampcf::dataset
