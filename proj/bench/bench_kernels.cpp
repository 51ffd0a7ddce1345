// Parallel stencil kernels against the serial reference versions.
//
//   bench_kernels --benchmark_filter=Laplacian
//   OMP_NUM_THREADS=4 bench_kernels

#include <benchmark/benchmark.h>

#include <random>

#include "taxis/operators.hpp"
#include "taxis/solver.hpp"

using namespace taxis;

namespace {

Field random_field(const GridSpec& g, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
  return f;
}

GridSpec grid_for(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return make_grid(n, n, 100.0, 100.0);
}

void set_counters(benchmark::State& state) {
  const auto cells = static_cast<double>(state.range(0) * state.range(0));
  state.counters["cells/s"] = benchmark::Counter(cells, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_Laplacian(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field f = random_field(g, 1, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f));
  set_counters(state);
}

void BM_LaplacianReference(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field f = random_field(g, 1, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::laplacian(f));
  set_counters(state);
}

void BM_TaxisDivergence(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field u = random_field(g, 2, 0.0, 1.0);
  const Field c = random_field(g, 3, 0.1, 1.0);
  const Field s = random_field(g, 4, 0.0, 1.0);
  StencilWorkspace ws(g);
  for (auto _ : state) benchmark::DoNotOptimize(taxis_divergence(u, c, s, &ws));
  set_counters(state);
}

void BM_TaxisDivergenceReference(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field u = random_field(g, 2, 0.0, 1.0);
  const Field c = random_field(g, 3, 0.1, 1.0);
  const Field s = random_field(g, 4, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::taxis_divergence(u, c, s));
  set_counters(state);
}

void BM_DiffusionMatvec(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field f = random_field(g, 5, 0.0, 1.0);
  const DiffusionOperator A{g, 1.0, 0.01};
  Field out(g);
  for (auto _ : state) {
    A.apply(f.values(), out.values());
    benchmark::DoNotOptimize(out.data());
  }
  set_counters(state);
}

void BM_DiffusionMatvecReference(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field f = random_field(g, 5, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::nonneg_diffusion_matvec(f, 1.0, 0.01));
  set_counters(state);
}

void BM_ImplicitSolve(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const Field rhs = random_field(g, 6, 0.0, 1.0);
  SolverConfig cfg;
  CgResult r;
  for (auto _ : state) benchmark::DoNotOptimize(implicit_diffusion_solve(rhs, 10.0, 0.01, cfg, &r));
  state.counters["cg_iterations"] = r.iterations;
  set_counters(state);
}

}  // namespace

BENCHMARK(BM_Laplacian)->Arg(100)->Arg(400);
BENCHMARK(BM_LaplacianReference)->Arg(100)->Arg(400);
BENCHMARK(BM_TaxisDivergence)->Arg(100)->Arg(400);
BENCHMARK(BM_TaxisDivergenceReference)->Arg(100)->Arg(400);
BENCHMARK(BM_DiffusionMatvec)->Arg(100)->Arg(400);
BENCHMARK(BM_DiffusionMatvecReference)->Arg(100)->Arg(400);
BENCHMARK(BM_ImplicitSolve)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
