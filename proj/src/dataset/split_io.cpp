#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "vampcf/dataset/split.hpp"
#include "vampcf/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vampcf::dataset {

namespace {

void write_pairs(const fs::path& path, const std::vector<const InteractionVector*>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << "user_index,item_index\n";
  for (const InteractionVector* v : rows)
    for (std::uint32_t item : v->items) out << v->user << ',' << item << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

std::size_t interaction_count(const std::vector<const InteractionVector*>& rows) {
  std::size_t n = 0;
  for (const auto* v : rows) n += v->count();
  return n;
}

std::size_t parse_index(std::string_view s, const fs::path& path, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(path.string(), line, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::pair<std::size_t, std::string>> read_two_columns(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::pair<std::size_t, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;  // header
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string(), line_no, "expected two columns");
    rows.emplace_back(parse_index(std::string_view(line).substr(0, comma), path, line_no),
                      line.substr(comma + 1));
  }
  return rows;
}

std::map<std::size_t, InteractionVector> read_interactions(const fs::path& path,
                                                           std::size_t n_items) {
  std::map<std::size_t, InteractionVector> users;
  std::size_t line = 1;
  for (const auto& [user, item_text] : read_two_columns(path)) {
    ++line;
    const std::size_t item = parse_index(item_text, path, line);
    auto& v = users[user];
    v.user = user;
    v.items.push_back(static_cast<std::uint32_t>(item));
  }
  for (auto& [user, v] : users) {
    std::sort(v.items.begin(), v.items.end());
    validate(v, n_items);
  }
  return users;
}

std::vector<HeldoutUser> read_heldout(const fs::path& tr, const fs::path& te, std::size_t n_items) {
  auto fold_in = read_interactions(tr, n_items);
  auto heldout = read_interactions(te, n_items);
  std::vector<HeldoutUser> out;
  for (auto& [user, v] : fold_in) {
    auto it = heldout.find(user);
    if (it == heldout.end()) {
      throw DataError(te.string() + ": user " + std::to_string(user) + " has no heldout items");
    }
    out.push_back({std::move(v), std::move(it->second)});
    heldout.erase(it);
  }
  if (!heldout.empty()) {
    throw DataError(tr.string() + ": user " + std::to_string(heldout.begin()->first) +
                    " has no fold-in items");
  }
  return out;
}

}  // namespace

void write_split(const DatasetSplit& split, const fs::path& dir) {
  fs::path staging = dir;
  staging += ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);

  {
    std::ofstream out(staging / "vocab.csv", std::ios::binary);
    out << "index,item_id\n";
    for (std::size_t i = 0; i < split.vocabulary.size(); ++i)
      out << i << ',' << split.vocabulary[i] << '\n';
    if (!out) throw DataError("failed writing vocab.csv");
  }

  std::vector<const InteractionVector*> train;
  for (const auto& v : split.train) train.push_back(&v);
  write_pairs(staging / "train.csv", train);

  json counts;
  counts["train"] = {{"users", train.size()}, {"interactions", interaction_count(train)}};
  const std::pair<const char*, const std::vector<HeldoutUser>*> groups[] = {
      {"validation", &split.validation}, {"test", &split.test}};
  for (const auto& [name, users] : groups) {
    std::vector<const InteractionVector*> tr;
    std::vector<const InteractionVector*> te;
    for (const auto& h : *users) {
      tr.push_back(&h.fold_in);
      te.push_back(&h.heldout);
    }
    write_pairs(staging / (std::string(name) + "_tr.csv"), tr);
    write_pairs(staging / (std::string(name) + "_te.csv"), te);
    counts[name] = {{"users", users->size()},
                    {"fold_in_interactions", interaction_count(tr)},
                    {"heldout_interactions", interaction_count(te)}};
  }

  json meta;
  meta["N"] = split.n_users();
  meta["M"] = split.n_items();
  meta["seed"] = split.options.seed;
  meta["vocab_fingerprint"] = split.fingerprint();
  meta["parameters"] = {{"n_heldout_users", split.options.n_heldout_users},
                        {"fold_in_fraction", split.options.fold_in_fraction}};
  if (split.ingest) {
    meta["parameters"]["min_rating"] = split.ingest->min_rating;
    meta["parameters"]["min_items"] = split.ingest->min_items;
  }
  meta["counts"] = counts;
  meta["diagnostics"] = {
      {"dropped_out_of_vocab_items", split.diagnostics.dropped_out_of_vocab_items},
      {"discarded_empty_fold_in", split.diagnostics.discarded_empty_fold_in},
      {"discarded_empty_heldout", split.diagnostics.discarded_empty_heldout}};
  {
    std::ofstream out(staging / "meta.json", std::ios::binary);
    out << meta.dump(2) << '\n';
    if (!out) throw DataError("failed writing meta.json");
  }

  if (fs::exists(dir)) {
    if (!fs::exists(dir / "meta.json")) {
      throw DataError("refusing to replace " + dir.string() + ": not a split directory");
    }
    fs::remove_all(dir);
  }
  fs::rename(staging, dir);
}

DatasetSplit read_split(const fs::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) throw DataError("cannot open " + (dir / "meta.json").string());
  json meta;
  try {
    meta_in >> meta;
  } catch (const json::exception& e) {
    throw DataError("meta.json: " + std::string(e.what()));
  }

  DatasetSplit split;
  std::size_t expect = 0;
  for (auto& [index, id] : read_two_columns(dir / "vocab.csv")) {
    if (index != expect++) throw DataError("vocab.csv: indices must be 0..M-1 in order");
    split.vocabulary.push_back(std::move(id));
  }
  const std::size_t m = split.vocabulary.size();
  for (auto& [user, v] : read_interactions(dir / "train.csv", m)) split.train.push_back(std::move(v));
  split.validation = read_heldout(dir / "validation_tr.csv", dir / "validation_te.csv", m);
  split.test = read_heldout(dir / "test_tr.csv", dir / "test_te.csv", m);

  try {
    split.options.seed = meta.at("seed").get<std::uint64_t>();
    const auto& p = meta.at("parameters");
    split.options.n_heldout_users = p.at("n_heldout_users").get<std::size_t>();
    split.options.fold_in_fraction = p.at("fold_in_fraction").get<double>();
    if (p.contains("min_rating")) {
      split.ingest = IngestOptions{p.at("min_rating").get<double>(), p.at("min_items").get<std::size_t>()};
    }
    const auto& d = meta.at("diagnostics");
    split.diagnostics.dropped_out_of_vocab_items = d.at("dropped_out_of_vocab_items").get<std::size_t>();
    split.diagnostics.discarded_empty_fold_in = d.at("discarded_empty_fold_in").get<std::size_t>();
    split.diagnostics.discarded_empty_heldout = d.at("discarded_empty_heldout").get<std::size_t>();
    if (meta.at("M").get<std::size_t>() != m) throw DataError("meta.json: M disagrees with vocab.csv");
    if (meta.at("vocab_fingerprint").get<std::string>() != split.fingerprint()) {
      throw DataError("meta.json: vocabulary fingerprint disagrees with vocab.csv");
    }
  } catch (const json::exception& e) {
    throw DataError("meta.json: " + std::string(e.what()));
  }
  return split;
}

}  // namespace vampcf::dataset
