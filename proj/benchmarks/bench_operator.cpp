#include <benchmark/benchmark.h>

#include "anisofrac/operator.hpp"
#include "anisofrac/presets.hpp"
#include "anisofrac/solver.hpp"
#include "anisofrac/verification.hpp"

using namespace anisofrac;

namespace {

const BoxDomain kBox{{1.0, 1.0}, 1.0};

void BM_FracLaplacian1D(benchmark::State& st) {
  const CoordinateDecomposition d({1, 1}, {st.range(0) / 100.0}, {1.0});
  const Preset p = separable_bump_preset(d, kBox);
  const QuadratureSpec q = QuadratureSpec::for_length_scale(1.0);
  const std::vector<double> x{0.3, -0.2};
  for (auto _ : st) benchmark::DoNotOptimize(frac_laplacian_point(*p.field, d, 0, x, q));
}
BENCHMARK(BM_FracLaplacian1D)->Arg(25)->Arg(50)->Arg(75);

void BM_FracLaplacian2D(benchmark::State& st) {
  const CoordinateDecomposition d({2, 1}, {0.5}, {1.0});
  const BoxDomain box{{1.0, 1.0}, 1.0};
  const Preset p = separable_bump_preset(d, box);
  QuadratureSpec q = QuadratureSpec::for_length_scale(1.0);
  q.angular_nodes = static_cast<int>(st.range(0));
  const std::vector<double> x{0.3, 0.1, -0.2};
  for (auto _ : st) benchmark::DoNotOptimize(frac_laplacian_point(*p.field, d, 0, x, q));
}
BENCHMARK(BM_FracLaplacian2D)->Arg(16)->Arg(64);

void BM_ApplyL(benchmark::State& st) {
  const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
  const Preset p = separable_bump_preset(d, kBox);
  const QuadratureSpec q = QuadratureSpec::for_length_scale(1.0);
  const std::vector<double> x{0.1, 0.4};
  for (auto _ : st) benchmark::DoNotOptimize(apply_L(*p.field, d, x, q));
}
BENCHMARK(BM_ApplyL);

void BM_Solve(benchmark::State& st) {
  const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
  const Preset p = separable_bump_preset(d, kBox);
  const double h = 2.0 / static_cast<double>(st.range(0));
  const CollocationProblem prob =
      manufactured_problem(d, kBox, p.field, {h, h}, QuadratureSpec::for_length_scale(1.0));
  for (auto _ : st) benchmark::DoNotOptimize(solve(prob));
  st.counters["unknowns"] = static_cast<double>((st.range(0) - 1) * (st.range(0) - 1));
}
BENCHMARK(BM_Solve)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SupLu(benchmark::State& st) {
  const CoordinateDecomposition d({1, 1}, {0.5}, {1.0});
  const Preset p = separable_bump_preset(d, kBox);
  const QuadratureSpec q = QuadratureSpec::for_length_scale(1.0);
  for (auto _ : st)
    benchmark::DoNotOptimize(estimate_sup_Lu(*p.field, d, kBox, static_cast<int>(st.range(0)), q));
}
BENCHMARK(BM_SupLu)->Arg(12)->Arg(36)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
