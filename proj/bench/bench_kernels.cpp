// Serial reference loops against the OpenMP kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "conflab/parallel.hpp"
#include "conflab/quotient.hpp"
#include "conflab/tensor.hpp"

using namespace conflab;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_CurvatureG0(benchmark::State& state) {
  const auto g = tensor::build_g0(3, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(tensor::compute_curvature(g, mode(state)));
  label(state);
}
BENCHMARK(BM_CurvatureG0)->ArgsProduct({{0, 1}, {3, 4, 5}})->Unit(benchmark::kMillisecond);

// every entry nonconstant
tensor::MetricSpec dense_metric(int n) {
  std::vector<Polynomial> c(n * n, Polynomial(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Polynomial e = Polynomial::constant(n, i == j ? n + 1 : 0);
      e += Polynomial::variable(n, (i + j) % n) * Polynomial::variable(n, (i * j + 1) % n);
      c[i * n + j] = e;
      c[j * n + i] = e;
    }
  return tensor::MetricSpec({0, n}, std::move(c));
}

void BM_ChristoffelDense(benchmark::State& state) {
  const auto g = dense_metric(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(tensor::christoffel(g, mode(state)));
  label(state);
}
BENCHMARK(BM_ChristoffelDense)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  const auto m = quotient::build_model(3, 3, {-2, -1.5});
  const quotient::ShiftTable shifts(m, 40);
  const int grid = static_cast<int>(state.range(1));
  const auto a = quotient::sample_box(6, grid);
  const auto b = quotient::sample_segment(6, grid);
  for (auto _ : state) benchmark::DoNotOptimize(quotient::hausdorff_distance(shifts, a, b, mode(state)));
  label(state);
}
BENCHMARK(BM_Hausdorff)->ArgsProduct({{0, 1}, {3, 5}})->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
