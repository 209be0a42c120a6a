#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vmwe/corpus.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/lexicon.hpp"

namespace {

std::vector<vmwe::Sentence> random_corpus(std::size_t sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::istringstream in(oracle::random_cupt(rng, sentences, "b"));
  vmwe::CuptReader reader(in);
  std::vector<vmwe::Sentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  return out;
}

void BM_BuildLexicon(benchmark::State& state) {
  const auto corpus = random_corpus(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::build_lexicon(corpus, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildLexicon)->Arg(200)->Arg(2000);

void BM_ExtractCandidates(benchmark::State& state) {
  const auto train = random_corpus(2000, 1);
  const auto corpus = random_corpus(static_cast<std::size_t>(state.range(0)), 2);
  const auto lexicon = vmwe::build_lexicon(train, 2);
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::extract_candidates(corpus, lexicon));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtractCandidates)->Arg(200)->Arg(2000);

}  // namespace
