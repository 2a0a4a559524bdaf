#include <benchmark/benchmark.h>

#include <random>

#include "cavgeo/entangle.hpp"
#include "cavgeo/propagate.hpp"

namespace {

using namespace cavgeo;

Matrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

void BM_MatExp(benchmark::State& state) {
  const Matrix a = kI * random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mat_exp(a));
}
BENCHMARK(BM_MatExp)->Arg(16)->Arg(40)->Arg(80);

void BM_ExpmAction(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix a = kI * random_hermitian(n, 2);
  const Matrix block = Matrix::Identity(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(expm_action(a, block));
}
BENCHMARK(BM_ExpmAction)->Arg(40)->Arg(80);

void BM_EvolveColumns(benchmark::State& state) {
  const HilbertLayout layout(2, static_cast<int>(state.range(0)));
  const double delta = 4.5578;
  const EffectiveCoupling c{0.15 * delta, delta, 0.0, Axis::kX};
  const std::vector<EffectiveCoupling> cs = {c, c};
  const HamiltonianFn h = [&](double t) { return h_eff(cs, layout, t); };
  const Matrix block = fock_range_block(layout, 5);
  const double times[] = {closure_time(delta, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_columns_at(h, block, 0.0, times));
}
BENCHMARK(BM_EvolveColumns)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PulsedGhz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GhzOptions opts;
  opts.mode = PrepMode::kPulsed;
  const HilbertLayout layout(n, 12);
  for (auto _ : state) benchmark::DoNotOptimize(ghz_prepare(n, layout, opts));
}
BENCHMARK(BM_PulsedGhz)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
