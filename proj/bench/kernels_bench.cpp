// Serial vs OpenMP kernels at fixture-like sizes.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ctscope/kernels.hpp"

using namespace ctscope::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  return v;
}

template <auto Kernel>
void BM_nearest(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 32, k = 6;
  auto pts = random_values(n * d, 1), cen = random_values(k * d, 2);
  std::vector<int> labels(n);
  std::vector<double> dist(n);
  for (auto _ : state) {
    Kernel(MatrixView{pts.data(), n, d}, MatrixView{cen.data(), k, d}, labels, dist);
    benchmark::DoNotOptimize(dist.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Kernel>
void BM_dot(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 256;
  auto rows = random_values(n * d, 3), q = random_values(d, 4);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(MatrixView{rows.data(), n, d}, q, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Kernel>
void BM_gram(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), d = 256;
  auto xt = random_values(n * d, 5);
  std::vector<double> out(d * d);
  for (auto _ : state) {
    Kernel(MatrixView{xt.data(), d, n}, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_nearest<serial::nearest_centroid>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_nearest<parallel::nearest_centroid>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_dot<serial::dot_scores>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_dot<parallel::dot_scores>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_gram<serial::gram>)->Arg(2000)->Arg(10000);
BENCHMARK(BM_gram<parallel::gram>)->Arg(2000)->Arg(10000);

BENCHMARK_MAIN();
