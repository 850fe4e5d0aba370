#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "scholarmetrics/collab.hpp"
#include "scholarmetrics/impact.hpp"
#include "scholarmetrics/metrics.hpp"
#include "scholarmetrics/testkit/synth.hpp"

using namespace scholarmetrics;

namespace {

collab::CoauthorNetwork random_network(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<std::uint64_t> weight(1, 20);
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back("a" + std::to_string(i));
  std::vector<collab::CoauthorEdge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (keep(rng)) edges.push_back({a, b, weight(rng)});
    }
  }
  return collab::CoauthorNetwork(std::move(nodes), std::move(edges));
}

const Corpus& corpus_of_size(std::size_t per_cell) {
  static std::map<std::size_t, Corpus> cache;
  auto it = cache.find(per_cell);
  if (it == cache.end()) {
    testkit::SynthSpec spec;
    spec.works_per_cell = per_cell;
    it = cache.emplace(per_cell, testkit::generate_corpus(spec)).first;
  }
  return it->second;
}

}  // namespace

static void BM_WeightedClustering(benchmark::State& state) {
  auto net = random_network(static_cast<std::size_t>(state.range(0)), 0.02, 7);
  for (auto _ : state) benchmark::DoNotOptimize(collab::weighted_clustering(net));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedClustering)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

static void BM_ObservedExpected(benchmark::State& state) {
  const auto& c = corpus_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(impact::observed_expected_matrix(c, std::nullopt));
}
BENCHMARK(BM_ObservedExpected)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ComputeMetrics(benchmark::State& state) {
  const auto& c = corpus_of_size(static_cast<std::size_t>(state.range(0)));
  metrics::MetricsOptions opts;
  opts.workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::compute_metrics(c, opts));
}
BENCHMARK(BM_ComputeMetrics)->Args({200, 1})->Args({200, 0})->Unit(benchmark::kMillisecond);

static void BM_PowerLawFit(benchmark::State& state) {
  std::vector<double> y;
  for (int x = 1; x <= state.range(0); ++x) y.push_back(1000.0 / x);
  for (auto _ : state) benchmark::DoNotOptimize(impact::fit_power_law(std::span<const double>(y)));
}
BENCHMARK(BM_PowerLawFit)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
