#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <vector>

#include "smoothrank/concordance.hpp"
#include "smoothrank/density.hpp"
#include "smoothrank/loess.hpp"
#include "smoothrank/smooth_rank.hpp"
#include "smoothrank/synthetic.hpp"

namespace {

using namespace smoothrank;

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  for (auto& x : v) x = z(rng);
  return v;
}

void BM_ConcordanceIndex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto scores = normal_draws(n, 1);
  const auto times = normal_draws(n, 2);
  std::vector<SurvivalTarget> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = {std::exp(times[i]), i % 3 != 0};
  for (auto _ : state) benchmark::DoNotOptimize(concordance_index(scores, targets));
  state.SetComplexityN(state.range(0));
}

void BM_DensityEstimate(benchmark::State& state) {
  const auto samples = normal_draws(static_cast<std::size_t>(state.range(0)), 3);
  const auto grid = make_grid(samples, samples);
  const double h = bandwidth(samples);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_density(samples, grid, h));
}

void BM_LoessFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y = normal_draws(n, 4);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(loess_fit(x, y));
}

void BM_Train(benchmark::State& state) {
  SyntheticConfig cfg;
  cfg.n_features = static_cast<std::size_t>(state.range(0));
  const auto data = generate(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(train(data));
}

void BM_TrainPbc(benchmark::State& state) {
  const auto data = load_csv(std::filesystem::path(SMOOTHRANK_DATA_DIR) / "pbc.csv");
  for (auto _ : state) benchmark::DoNotOptimize(train(data));
}

void BM_Score(benchmark::State& state) {
  const auto data = generate({});
  const auto model = train(data);
  for (auto _ : state) benchmark::DoNotOptimize(score_all(model, data));
}

}  // namespace

BENCHMARK(BM_ConcordanceIndex)->Range(64, 4096)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_DensityEstimate)->Arg(100)->Arg(400);
BENCHMARK(BM_LoessFit)->Arg(128)->Arg(512);
BENCHMARK(BM_Train)->Arg(5)->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainPbc)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Score)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
