// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// thread count of interest; on one thread the two should be close.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "vampcf/eval/evaluate.hpp"
#include "vampcf/numcore/kernels.hpp"

namespace nc = vampcf::numcore;

namespace {

nc::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  nc::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

// batch x M input times M x hidden weights: the first encoder layer.
template <nc::Matrix (*Fn)(const nc::Matrix&, const nc::Matrix&)>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 2000, 1);
  const auto b = random_matrix(2000, 600, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * 2000 * 600));
}

template <nc::Matrix (*Fn)(const nc::Matrix&, const nc::Matrix&, const nc::Matrix&)>
void BM_PairwisePdf(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto z = random_matrix(500, 200, 3);
  const auto mu = random_matrix(k, 200, 4);
  const auto lv = random_matrix(k, 200, 5);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(z, mu, lv));
}

void BM_Evaluate(benchmark::State& state) {
  constexpr std::size_t kItems = 5000;
  constexpr std::size_t kUsers = 1000;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::uint32_t> item(0, kItems - 1);
  std::vector<vampcf::dataset::HeldoutUser> users(kUsers);
  for (std::size_t u = 0; u < kUsers; ++u) {
    std::vector<std::uint32_t> drawn;
    for (int i = 0; i < 40; ++i) drawn.push_back(item(rng));
    std::sort(drawn.begin(), drawn.end());
    drawn.erase(std::unique(drawn.begin(), drawn.end()), drawn.end());
    auto& h = users[u];
    h.fold_in.user = h.heldout.user = u;
    for (std::size_t i = 0; i < drawn.size(); ++i)
      (i % 5 == 0 ? h.heldout.items : h.fold_in.items).push_back(drawn[i]);
  }
  const auto scores = random_matrix(256, kItems, 7);
  const vampcf::eval::Scorer scorer = [&](const nc::Matrix& x) {
    nc::Matrix out(x.rows(), kItems);
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < kItems; ++c) out(r, c) = scores(r, c);
    return out;
  };
  const std::vector<std::size_t> ks = {20, 50, 100};
  vampcf::eval::EvalOptions options;
  options.parallel = state.range(0) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(vampcf::eval::evaluate_scores(users, kItems, ks, scorer, options));
}

}  // namespace

BENCHMARK(BM_Matmul<nc::serial::matmul>)->Name("matmul/serial")->Arg(100)->Arg(500);
BENCHMARK(BM_Matmul<nc::parallel::matmul>)->Name("matmul/parallel")->Arg(100)->Arg(500);
BENCHMARK(BM_PairwisePdf<nc::serial::pairwise_gauss_log_pdf>)
    ->Name("pairwise_gauss_log_pdf/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_PairwisePdf<nc::parallel::pairwise_gauss_log_pdf>)
    ->Name("pairwise_gauss_log_pdf/parallel")->Arg(100)->Arg(1000);
BENCHMARK(BM_Evaluate)->Name("evaluate/serial")->Arg(0);
BENCHMARK(BM_Evaluate)->Name("evaluate/parallel")->Arg(1);

BENCHMARK_MAIN();
