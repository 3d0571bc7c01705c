#include <benchmark/benchmark.h>

#include "kt/datasets.hpp"
#include "kt/learner.hpp"
#include "kt/teacher.hpp"

using namespace kt;

namespace {

const ReferenceModel& reference() {
  static const ReferenceModel ref = train_reference(
      generate(DatasetKind::circles, 200, 0.05, 7), KernelSpec::gaussian(0.9), LearnerConfig{});
  return ref;
}

void BM_GaussianTeachingSet(benchmark::State& state) {
  GaussianTeachConfig cfg;
  cfg.s = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_teaching_set(reference().model, cfg, seed++));
}
BENCHMARK(BM_GaussianTeachingSet)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_FitTeachingSet(benchmark::State& state) {
  GaussianTeachConfig cfg;
  cfg.s = static_cast<int>(state.range(0));
  const auto g = gaussian_teaching_set(reference().model, cfg, 1);
  LearnerConfig lc;
  lc.max_iters = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(fit_detailed(g.set, KernelSpec::gaussian(0.9), lc));
  state.counters["items"] = static_cast<double>(g.set.size());
}
BENCHMARK(BM_FitTeachingSet)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_LinearTeachAndFit(benchmark::State& state) {
  Vector theta = Vector::LinSpaced(state.range(0), -1.0, 2.0);
  for (auto _ : state) {
    const auto ts = linear_teaching_set(theta);
    benchmark::DoNotOptimize(fit_detailed(ts, KernelSpec::linear(), LearnerConfig{}));
  }
}
BENCHMARK(BM_LinearTeachAndFit)->Arg(3)->Arg(10);

}  // namespace
