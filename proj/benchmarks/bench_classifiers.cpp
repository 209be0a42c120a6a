#include <benchmark/benchmark.h>

#include <random>

#include "oracles.hpp"
#include "vmwe/classifiers.hpp"

namespace {

struct Data {
  vmwe::ColumnDictionary dict;
  vmwe::EncodedMatrix m;
  std::vector<bool> y;
};

Data noisy(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(9);
  auto f = oracle::any_separable(rng, n, d);
  for (std::size_t i = 0; i < n; i += 17) f.y[i] = !f.y[i];
  Data out{oracle::dense_dictionary(d), {}, f.y};
  out.m = oracle::dense_encode(f.x, out.dict);
  return out;
}

void BM_TrainSvm(benchmark::State& state) {
  const auto data = noisy(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state)
    benchmark::DoNotOptimize(vmwe::train(vmwe::ClassifierKind::LinearSvm, data.m, data.dict, data.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainSvm)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TrainNaiveBayes(benchmark::State& state) {
  const auto data = noisy(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state)
    benchmark::DoNotOptimize(vmwe::train(vmwe::ClassifierKind::NaiveBayes, data.m, data.dict, data.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainNaiveBayes)->Arg(5000);

void BM_TrainTree(benchmark::State& state) {
  const auto data = noisy(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state)
    benchmark::DoNotOptimize(vmwe::train(vmwe::ClassifierKind::DecisionTree, data.m, data.dict, data.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainTree)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
