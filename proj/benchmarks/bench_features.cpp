#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vmwe/corpus.hpp"
#include "vmwe/extraction.hpp"
#include "vmwe/features.hpp"
#include "vmwe/lexicon.hpp"

namespace {

struct Setup {
  vmwe::Lexicon lexicon;
  std::vector<vmwe::Candidate> candidates;
};

const Setup& setup() {
  static const Setup s = [] {
    std::mt19937_64 rng(5);
    std::istringstream in(oracle::random_cupt(rng, 2000, "f"));
    vmwe::CuptReader reader(in);
    std::vector<vmwe::Sentence> corpus;
    while (auto x = reader.next()) corpus.push_back(std::move(*x));
    Setup out;
    out.lexicon = vmwe::build_lexicon(corpus, 2);
    out.candidates = vmwe::extract_candidates(corpus, out.lexicon);
    return out;
  }();
  return s;
}

void BM_ComputeFeatures(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state)
    for (const auto& c : s.candidates) benchmark::DoNotOptimize(vmwe::compute_features(c, s.lexicon));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.candidates.size()));
}
BENCHMARK(BM_ComputeFeatures);

void BM_Encode(benchmark::State& state) {
  const auto& s = setup();
  std::vector<vmwe::FeatureVector> vs;
  for (const auto& c : s.candidates) vs.push_back(vmwe::compute_features(c, s.lexicon));
  for (auto _ : state) benchmark::DoNotOptimize(vmwe::encode(vs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(vs.size()));
}
BENCHMARK(BM_Encode);

}  // namespace
