#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ambiq/binary_density.hpp"
#include "ambiq/measures.hpp"
#include "ambiq/posterior_analytics.hpp"
#include "ambiq/posterior_sampling.hpp"

using namespace ambiq;

namespace {

ProbabilityVector random_point(std::mt19937_64& gen, std::size_t categories) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(categories + 1);
  double total = 0.0;
  for (auto& v : w) total += v = e(gen);
  for (auto& v : w) v /= total;
  return ProbabilityVector::from_simplex(w);
}

void BM_Measure(benchmark::State& state, MeasureKind measure) {
  std::mt19937_64 gen(1);
  const auto q = random_point(gen, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ambiguity(q, measure));
}
BENCHMARK_CAPTURE(BM_Measure, new, MeasureKind::New)->Arg(2)->Arg(8)->Arg(64);
BENCHMARK_CAPTURE(BM_Measure, modified, MeasureKind::Modified)->Arg(2)->Arg(8)->Arg(64);
BENCHMARK_CAPTURE(BM_Measure, old, MeasureKind::Old)->Arg(2)->Arg(8)->Arg(64);

void BM_ClosedFormMoments(benchmark::State& state) {
  const auto params = DirichletParams::symmetric(static_cast<std::size_t>(state.range(0)), 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_amb(params));
    benchmark::DoNotOptimize(var_amb(params));
  }
}
BENCHMARK(BM_ClosedFormMoments)->Arg(2)->Arg(16)->Arg(256);

void BM_ExpectedEntropy(benchmark::State& state) {
  const auto params = DirichletParams::symmetric(static_cast<std::size_t>(state.range(0)), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(expected_normalized_entropy(params));
}
BENCHMARK(BM_ExpectedEntropy)->Arg(2)->Arg(16)->Arg(256);

void BM_SampleTransformed(benchmark::State& state) {
  const DirichletParams params({5.0, 3.0, 2.0}, 1.5);
  const auto draws = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_transformed(params, MeasureKind::New, draws, 9));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(draws));
}
BENCHMARK(BM_SampleTransformed)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_BinaryDensityPoint(benchmark::State& state, MeasureKind measure) {
  const BinaryPosterior posterior({5, 3, 2}, 1.0, measure);
  double a = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior.density(a));
    a = a > 0.9 ? 0.05 : a + 0.0371;
  }
}
BENCHMARK_CAPTURE(BM_BinaryDensityPoint, new, MeasureKind::New)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_BinaryDensityPoint, modified, MeasureKind::Modified)->Unit(benchmark::kMicrosecond);

void BM_BinaryCdfGrid(benchmark::State& state) {
  const BinaryPosterior posterior({5, 3, 2}, 1.0, MeasureKind::New);
  const auto grid = binary_density_grid(MeasureKind::New, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(posterior.cdf_on_grid(grid));
}
BENCHMARK(BM_BinaryCdfGrid)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
