#include <benchmark/benchmark.h>

#include <vector>

#include "sma/bitvector.hpp"
#include "sma/bounds.hpp"
#include "sma/neural.hpp"
#include "sma/select_flip.hpp"

namespace {

void BM_HammingDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = sma::random_bitvector(n, 0.3, sma::SeedPath(1));
  const auto y = sma::random_bitvector(n, 0.3, sma::SeedPath(2));
  for (auto _ : state) benchmark::DoNotOptimize(sma::hamming_distance(x, y));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n / 4));
}
BENCHMARK(BM_HammingDistance)->Arg(1 << 10)->Arg(100000)->Arg(1 << 20);

void BM_SelectFlipApply(benchmark::State& state) {
  const std::size_t n = 100000;
  const auto h = sma::sample_select_flip(n, 1500, sma::SeedPath(3));
  const auto x = sma::random_bitvector(n, 0.3, sma::SeedPath(4));
  for (auto _ : state) benchmark::DoNotOptimize(h.apply(x));
}
BENCHMARK(BM_SelectFlipApply);

void BM_NeuralApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double p = 250.0 / static_cast<double>(n);
  const sma::NeuralAllocator h(n, p, 0.5, 0.57, sma::SeedPath(5));
  const auto x = sma::random_bitvector(n, 0.3, sma::SeedPath(6));
  for (auto _ : state) benchmark::DoNotOptimize(h.apply(x));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(2 * n));
}
BENCHMARK(BM_NeuralApply)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_NeuralBatchTrace(benchmark::State& state) {
  const std::size_t n = 100000;
  const sma::NeuralAllocator h(n, 2.5e-3, 0.5, 0.57, sma::SeedPath(7));
  std::vector<sma::BitVector> xs;
  for (std::uint64_t i = 0; i < 10; ++i) xs.push_back(sma::random_bitvector(n, 0.05 * (i + 1), sma::SeedPath(8).child("x", i)));
  for (auto _ : state) benchmark::DoNotOptimize(h.trace(xs));
}
BENCHMARK(BM_NeuralBatchTrace)->Unit(benchmark::kMillisecond);

void BM_GaussianFlipQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sma::bounds::lemma4_flip_prob(1e5, 0.57, 2.5e-3, 1e-4));
}
BENCHMARK(BM_GaussianFlipQuadrature);

void BM_TrinomialAtoms(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sma::bounds::lemma1_exact(m, 2.5e-3));
}
BENCHMARK(BM_TrinomialAtoms)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
