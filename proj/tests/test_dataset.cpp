#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "tempdir.hpp"
#include "vampcf/dataset/ingest.hpp"
#include "vampcf/dataset/interactions.hpp"
#include "vampcf/dataset/split.hpp"
#include "vampcf/error.hpp"

using namespace vampcf;
using namespace vampcf::dataset;
using vampcf::testing::TempDir;

namespace {

std::vector<UserHistory> binarize_text(const std::string& text, IngestOptions opt = {}) {
  std::istringstream in(text);
  return binarize(read_ratings(in), opt);
}

std::vector<UserHistory> numbered_users(std::size_t n, std::size_t min_items, std::size_t max_items,
                                        std::uint64_t seed, std::size_t catalogue = 50) {
  testing::ArchetypeOptions o;
  o.users = n;
  o.items = catalogue;
  o.archetypes = 1;
  o.min_items = min_items;
  o.max_items = max_items;
  o.seed = seed;
  return testing::archetype_users(o);
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("ingest keeps ratings at the threshold and drops short users") {
  std::string text = "user,item,rating,timestamp\n";
  for (int i = 0; i < 5; ++i) text += "a,i" + std::to_string(i) + ",4.0,100\n";
  for (int i = 0; i < 4; ++i) text += "b,i" + std::to_string(i) + ",5\n";
  text += "b,i9,3.5\n";  // below threshold: b keeps only 4 items
  const auto users = binarize_text(text);
  REQUIRE(users.size() == 1);
  CHECK(users[0].user_id == "a");
  CHECK(users[0].items.size() == 5);
}

TEST_CASE("duplicate pairs collapse to one interaction") {
  const auto users = binarize_text("u,x,4\nu,x,5\nu,y,4\n", {4.0, 1});
  REQUIRE(users.size() == 1);
  CHECK(users[0].items == std::vector<std::string>{"x", "y"});
}

TEST_CASE("ingest output order and filters") {
  const auto users = binarize_text("z,b,5\nz,a,5\ny,c,4\ny,c,1\nx,q,2\n", {4.0, 1});
  REQUIRE(users.size() == 2);
  CHECK(users[0].user_id == "y");
  CHECK(users[1].user_id == "z");
  CHECK(users[1].items == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tab separated input and header detection") {
  const auto users = binarize_text("uid\titem\tscore\nu\ta\t4\nu\tb\t5\n", {4.0, 2});
  REQUIRE(users.size() == 1);
  CHECK(users[0].items.size() == 2);
}

TEST_CASE("parse errors carry the line number") {
  std::istringstream in("u,a,4\nu,b,4\nu,c\n");
  try {
    read_ratings(in, "ratings.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("ratings.csv:3") != std::string::npos);
  }
  std::istringstream bad_rating("u,a,4\nu,b,high\n");
  CHECK_THROWS_AS(read_ratings(bad_rating), ParseError);
  std::istringstream bad_ts("u,a,4,xx\n");
  CHECK_THROWS_AS(read_ratings(bad_ts), ParseError);
}

TEST_CASE("no surviving user is an error") {
  CHECK_THROWS_AS(binarize_text("u,a,4\nu,b,4\nu,c,4\n"), DataError);
  CHECK_THROWS_AS(ingest("/nonexistent/ratings.csv", {}), DataError);
}

TEST_CASE("ingest invariants over random logs") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> user(0, 30), item(0, 40), rating(1, 5);
  std::ostringstream text;
  std::map<std::pair<int, int>, int> best;
  for (int i = 0; i < 2000; ++i) {
    const int u = user(rng), it = item(rng), r = rating(rng);
    text << "u" << u << ",i" << it << "," << r << "\n";
    auto& b = best[{u, it}];
    b = std::max(b, r);
  }
  const auto users = binarize_text(text.str(), {4.0, 8});
  for (const auto& h : users) {
    CHECK(h.items.size() >= 8);
    CHECK(std::is_sorted(h.items.begin(), h.items.end()));
    for (const auto& id : h.items) {
      CHECK(best.at({std::stoi(h.user_id.substr(1)), std::stoi(id.substr(1))}) >= 4);
    }
  }
}

TEST_CASE("to_dense / from_dense") {
  CHECK(to_dense(InteractionVector{0, {0, 2}}, 4) == numcore::Matrix::from_rows({{1, 0, 1, 0}}));
  CHECK(to_dense(InteractionVector{0, {}}, 3) == numcore::Matrix(1, 3));
  CHECK_THROWS_AS(to_dense(InteractionVector{0, {4}}, 4), ShapeError);
  CHECK_THROWS_AS(validate(InteractionVector{0, {2, 1}}, 4), DataError);

  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 100; ++t) {
    numcore::Matrix dense(1, 17);
    for (double& v : dense.values()) v = coin(rng) ? 1.0 : 0.0;
    CHECK(to_dense(from_dense(dense), 17) == dense);
  }
}

TEST_CASE("fold-in count") {
  CHECK(fold_in_count(10, 0.8) == 8);
  CHECK(fold_in_count(5, 0.8) == 4);
  CHECK(fold_in_count(1, 0.8) == 1);
  CHECK(fold_in_count(7, 0.5) == 4);
}

TEST_CASE("split sizes and disjointness") {
  const auto users = numbered_users(100, 10, 20, 3);
  const DatasetSplit s = split(users, {10, 0.8, 42});
  CHECK(s.train.size() == 80);
  CHECK(s.validation.size() == 10);
  CHECK(s.test.size() == 10);

  std::set<std::size_t> seen;
  for (const auto& v : s.train) CHECK(seen.insert(v.user).second);
  for (const auto& h : s.validation) CHECK(seen.insert(h.fold_in.user).second);
  for (const auto& h : s.test) CHECK(seen.insert(h.fold_in.user).second);
  CHECK(seen.size() == 100);
}

TEST_CASE("split invariants hold by set arithmetic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto users = numbered_users(60, 5, 15, seed, 80);
    const DatasetSplit s = split(users, {8, 0.8, seed});

    std::map<std::string, std::set<std::string>> history;
    for (const auto& u : users) history[u.user_id] = as_set(u.items);
    std::set<std::string> vocab_from_train;
    for (const auto& v : s.train)
      for (auto i : v.items) vocab_from_train.insert(s.vocabulary[i]);
    CHECK(vocab_from_train == as_set(s.vocabulary));
    CHECK(std::is_sorted(s.vocabulary.begin(), s.vocabulary.end()));

    const std::size_t kept = s.validation.size() + s.test.size();
    CHECK(kept + s.diagnostics.discarded_empty_fold_in + s.diagnostics.discarded_empty_heldout == 16);

    for (const auto* group : {&s.validation, &s.test}) {
      for (const auto& h : *group) {
        validate(h.fold_in, s.n_items());
        validate(h.heldout, s.n_items());
        CHECK_FALSE(h.fold_in.items.empty());
        CHECK_FALSE(h.heldout.items.empty());
        CHECK(h.fold_in.user == h.heldout.user);
        std::vector<std::uint32_t> overlap;
        std::set_intersection(h.fold_in.items.begin(), h.fold_in.items.end(),
                              h.heldout.items.begin(), h.heldout.items.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
        // the union is the in-vocabulary part of exactly one original history
        std::set<std::string> joined;
        for (auto i : h.fold_in.items) joined.insert(s.vocabulary[i]);
        for (auto i : h.heldout.items) joined.insert(s.vocabulary[i]);
        int matches = 0;
        for (const auto& [id, items] : history) {
          std::set<std::string> in_vocab;
          for (const auto& it : items)
            if (vocab_from_train.count(it)) in_vocab.insert(it);
          if (in_vocab == joined) ++matches;
        }
        CHECK(matches >= 1);
      }
    }
  }
}

TEST_CASE("eighty percent of a ten-item history is folded in") {
  std::vector<UserHistory> users;
  for (int u = 0; u < 30; ++u) {
    UserHistory h{"u" + std::to_string(100 + u), {}};
    for (int i = 0; i < 10; ++i) h.items.push_back("i" + std::to_string(10 + i));
    users.push_back(h);
  }
  const DatasetSplit s = split(users, {5, 0.8, 1});
  REQUIRE(s.validation.size() == 5);
  for (const auto& h : s.validation) {
    CHECK(h.fold_in.count() == 8);
    CHECK(h.heldout.count() == 2);
  }
}

TEST_CASE("out-of-vocabulary items are dropped and empty users discarded") {
  std::vector<UserHistory> users;
  for (int u = 0; u < 10; ++u) users.push_back({"t" + std::to_string(u), {"a", "b", "c"}});
  // only items unseen in training: whichever group it lands in, it is discarded
  users.push_back({"x", {"p", "q", "r", "s", "t"}});
  bool saw_discard = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DatasetSplit s = split(users, {2, 0.8, seed});
    for (const auto* group : {&s.validation, &s.test})
      for (const auto& h : *group) {
        for (auto i : h.fold_in.items) CHECK(i < s.n_items());
        for (auto i : h.heldout.items) CHECK(i < s.n_items());
      }
    const auto& d = s.diagnostics;
    if (d.discarded_empty_fold_in + d.discarded_empty_heldout > 0) saw_discard = true;
  }
  CHECK(saw_discard);
}

TEST_CASE("split configuration errors") {
  const auto users = numbered_users(20, 5, 8, 1);
  CHECK_THROWS_AS(split(users, {10, 0.8, 0}), ConfigError);
  CHECK_THROWS_AS(split(users, {2, 1.0, 0}), ConfigError);
  CHECK_THROWS_AS(split(users, {2, 0.0, 0}), ConfigError);
  CHECK_NOTHROW(split(users, {9, 0.8, 0}));
}

TEST_CASE("split is a pure function of its inputs") {
  const auto users = numbered_users(80, 5, 20, 9);
  const DatasetSplit a = split(users, {10, 0.8, 5});
  const DatasetSplit b = split(users, {10, 0.8, 5});
  CHECK(a.vocabulary == b.vocabulary);
  CHECK(a.train == b.train);
  CHECK(a.fingerprint() == b.fingerprint());
  const DatasetSplit c = split(users, {10, 0.8, 6});
  CHECK_FALSE(a.train == c.train);
}

TEST_CASE("split files are byte identical across runs and round-trip") {
  const auto users = numbered_users(80, 5, 20, 9);
  TempDir tmp;
  write_split(split(users, {10, 0.8, 5}), tmp / "a");
  write_split(split(users, {10, 0.8, 5}), tmp / "b");
  const char* files[] = {"vocab.csv",     "train.csv",    "validation_tr.csv", "validation_te.csv",
                         "test_tr.csv",   "test_te.csv",  "meta.json"};
  for (const char* f : files) {
    INFO(f);
    const std::string bytes = testing::read_file(tmp.path() / "a" / f);
    CHECK_FALSE(bytes.empty());
    CHECK(bytes == testing::read_file(tmp.path() / "b" / f));
  }
  CHECK(std::distance(std::filesystem::directory_iterator(tmp / "a"),
                      std::filesystem::directory_iterator()) == 7);
  CHECK_FALSE(std::filesystem::exists(tmp / "a.partial"));

  const DatasetSplit original = split(users, {10, 0.8, 5});
  const DatasetSplit back = read_split(tmp / "a");
  CHECK(back.vocabulary == original.vocabulary);
  CHECK(back.train == original.train);
  REQUIRE(back.test.size() == original.test.size());
  for (std::size_t i = 0; i < back.test.size(); ++i) {
    CHECK(back.test[i].fold_in == original.test[i].fold_in);
    CHECK(back.test[i].heldout == original.test[i].heldout);
  }
  CHECK(back.fingerprint() == original.fingerprint());
}

TEST_CASE("write_split refuses to clobber a foreign directory") {
  const auto users = numbered_users(40, 5, 10, 2);
  TempDir tmp;
  std::filesystem::create_directories(tmp / "precious");
  testing::write_file(tmp / "precious" / "notes.txt", "keep me");
  CHECK_THROWS_AS(write_split(split(users, {4, 0.8, 1}), tmp / "precious"), DataError);
  CHECK(testing::read_file(tmp / "precious" / "notes.txt") == "keep me");
}

TEST_CASE("read_split detects a tampered vocabulary") {
  const auto users = numbered_users(40, 5, 10, 2);
  TempDir tmp;
  write_split(split(users, {4, 0.8, 1}), tmp / "s");
  std::string vocab = testing::read_file(tmp / "s" / "vocab.csv");
  const auto pos = vocab.find("\n0,") + 2;
  REQUIRE(pos != std::string::npos + 2);
  vocab.insert(pos + 1, "renamed_");
  testing::write_file(tmp / "s" / "vocab.csv", vocab);
  CHECK_THROWS_AS(read_split(tmp / "s"), DataError);
}
