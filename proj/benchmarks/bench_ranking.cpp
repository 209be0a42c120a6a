#include <benchmark/benchmark.h>

#include <random>

#include "oracles.hpp"
#include "vmwe/features.hpp"
#include "vmwe/ranking.hpp"

namespace {

void BM_Chi2(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto vs = oracle::random_vectors(rng, n);
  const auto y = oracle::random_labels(rng, n);
  const auto [m, dict] = vmwe::encode(vs);
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::rank_chi2(m, dict, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Chi2)->Arg(1000)->Arg(10000);

void BM_Gain(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto vs = oracle::random_vectors(rng, n);
  const auto y = oracle::random_labels(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::rank_gain(vs, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gain)->Arg(10000);

void BM_Forest(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const auto vs = oracle::random_vectors(rng, 5000);
  const auto y = oracle::random_labels(rng, 5000);
  const auto [m, dict] = vmwe::encode(vs);
  vmwe::ForestOptions opts;
  opts.trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::rank_forest(m, dict, y, opts));
}
BENCHMARK(BM_Forest)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
