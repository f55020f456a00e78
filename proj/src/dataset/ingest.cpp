#include "vampcf/dataset/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

#include "vampcf/error.hpp"

namespace vampcf::dataset {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  const char delim = line.find(',') == std::string_view::npos && line.find('\t') != std::string_view::npos
                         ? '\t'
                         : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    std::string_view f = line.substr(start, pos == std::string_view::npos ? line.npos : pos - start);
    while (!f.empty() && (f.front() == ' ')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ')) f.remove_suffix(1);
    fields.push_back(f);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<RatingRecord> read_ratings(std::istream& in, const std::string& source) {
  std::vector<RatingRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto fields = split_fields(line);
    const bool was_first = first_content_line;
    first_content_line = false;
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError(source, line_no,
                       "expected 3 or 4 fields, got " + std::to_string(fields.size()));
    }
    const auto rating = parse_double(fields[2]);
    if (!rating) {
      if (was_first) continue;  // header line
      throw ParseError(source, line_no, "rating '" + std::string(fields[2]) + "' is not numeric");
    }
    if (!std::isfinite(*rating)) throw ParseError(source, line_no, "rating is not finite");
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, line_no, "empty user or item id");
    }
    RatingRecord rec{std::string(fields[0]), std::string(fields[1]), *rating, std::nullopt};
    if (fields.size() == 4 && !fields[3].empty()) {
      rec.timestamp = parse_int(fields[3]);
      if (!rec.timestamp) {
        throw ParseError(source, line_no, "timestamp '" + std::string(fields[3]) + "' is not an integer");
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RatingRecord> read_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file " + path.string());
  return read_ratings(in, path.string());
}

std::vector<UserHistory> binarize(const std::vector<RatingRecord>& records,
                                  const IngestOptions& options) {
  std::map<std::string, std::set<std::string>> by_user;
  for (const RatingRecord& r : records) {
    if (r.rating >= options.min_rating) by_user[r.user_id].insert(r.item_id);
  }
  std::vector<UserHistory> users;
  for (auto& [user, items] : by_user) {
    if (items.size() < options.min_items) continue;
    users.push_back({user, std::vector<std::string>(items.begin(), items.end())});
  }
  if (users.empty()) {
    throw DataError("no user has at least " + std::to_string(options.min_items) +
                    " items rated >= " + std::to_string(options.min_rating));
  }
  return users;
}

std::vector<UserHistory> ingest(const std::filesystem::path& path, const IngestOptions& options) {
  return binarize(read_ratings(path), options);
}

}  // namespace vampcf::dataset
