#include <random>

#include <benchmark/benchmark.h>

#include "kt/kernel.hpp"
#include "kt/linalg.hpp"

using namespace kt;

namespace {

std::vector<Vector> points(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) {
    Vector p(d);
    for (int j = 0; j < d; ++j) p[j] = u(rng);
    out.push_back(p);
  }
  return out;
}

void BM_TruncatedFeatures(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const FeatureMap phi(KernelSpec::truncated_gaussian(0.9, s), 2);
  const auto xs = points(256, 2, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phi(xs[i++ % xs.size()]));
  state.counters["dim"] = static_cast<double>(phi.dim());
}
BENCHMARK(BM_TruncatedFeatures)->Arg(2)->Arg(6)->Arg(12)->Arg(20);

void BM_PolynomialFeatures(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const FeatureMap phi(KernelSpec::polynomial(k), 3);
  const auto xs = points(256, 3, 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phi(xs[i++ % xs.size()]));
}
BENCHMARK(BM_PolynomialFeatures)->Arg(2)->Arg(4)->Arg(8);

void BM_TruncatedKernel(benchmark::State& state) {
  const auto spec = KernelSpec::truncated_gaussian(0.9, static_cast<int>(state.range(0)));
  const auto xs = points(256, 2, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_kernel(spec, xs[i % 256], xs[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_TruncatedKernel)->Arg(6)->Arg(12);

void BM_GramSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto xs = points(n, 2, 4);
  const auto g = gram_matrix(KernelSpec::gaussian(2.0), xs);
  const Vector rhs = Vector::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_positive_definite(g, rhs));
}
BENCHMARK(BM_GramSolve)->Arg(20)->Arg(50)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
