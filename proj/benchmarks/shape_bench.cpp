#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "shapestat/extrinsic.hpp"
#include "shapestat/intrinsic.hpp"
#include "shapestat/simulate.hpp"

using namespace shapestat;

namespace {

KAd polygon(int k) {
  ComplexVector z(k);
  for (int j = 0; j < k; ++j) {
    z(j) = std::polar(1.0 + 0.2 * (j % 3), 2.0 * std::numbers::pi * j / k);
  }
  return KAd(z);
}

std::vector<Shape> sample(int k, int n, std::uint64_t stream) {
  return simulate_sample(SimSpec{polygon(k), 0.02, n}, 42, stream);
}

void BM_Eigensystem(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto s = sample(k, 50, 0);
  const auto avg = extrinsic::average_embedding(s);
  for (auto _ : state) benchmark::DoNotOptimize(extrinsic::hermitian_eigensystem(avg));
}
BENCHMARK(BM_Eigensystem)->Arg(5)->Arg(13)->Arg(50)->Arg(128);

void BM_ExtrinsicMean(benchmark::State& state) {
  const auto s = sample(static_cast<int>(state.range(0)), 100, 0);
  for (auto _ : state) benchmark::DoNotOptimize(extrinsic::extrinsic_mean(s));
}
BENCHMARK(BM_ExtrinsicMean)->Arg(5)->Arg(13)->Arg(50);

void BM_KarcherMean(benchmark::State& state) {
  const auto s = sample(static_cast<int>(state.range(0)), 100, 0);
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic::karcher_mean(s));
}
BENCHMARK(BM_KarcherMean)->Arg(5)->Arg(13)->Arg(50);

void BM_ExtrinsicMeanTest(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto a = sample(k, 50, 1);
  const auto b = sample(k, 50, 2);
  for (auto _ : state) benchmark::DoNotOptimize(extrinsic::extrinsic_mean_test(a, b, 0.05));
}
BENCHMARK(BM_ExtrinsicMeanTest)->Arg(5)->Arg(13);

void BM_IntrinsicMeanTest(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto a = sample(k, 50, 1);
  const auto b = sample(k, 50, 2);
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic::intrinsic_mean_test(a, b, 0.05));
}
BENCHMARK(BM_IntrinsicMeanTest)->Arg(5)->Arg(13);

}  // namespace

BENCHMARK_MAIN();
