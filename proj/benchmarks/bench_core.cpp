#include <benchmark/benchmark.h>

#include <random>

#include "solab/catalog.hpp"
#include "solab/grid.hpp"
#include "solab/heisenberg.hpp"
#include "solab/solver.hpp"

using namespace solab;

static void BM_GroupMultiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(2 * n + 1), b(2 * n + 1);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  const GroupPoint p(a), q(b);
  for (auto _ : state) benchmark::DoNotOptimize(group_multiply(p, q));
}
BENCHMARK(BM_GroupMultiply)->Arg(1)->Arg(4);

static void BM_HorizontalGradient(benchmark::State& state) {
  const GridPtr g = Grid::cube(1, 1.0, static_cast<std::size_t>(state.range(0)));
  const ScalarField u = ScalarField::sample(g, [](std::span<const double> x) { return std::sin(x[0]) * x[2] + x[1]; });
  for (auto _ : state) benchmark::DoNotOptimize(horizontal_gradient(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g->node_count()));
}
BENCHMARK(BM_HorizontalGradient)->Arg(17)->Arg(33);

static void BM_EnergyGradient(benchmark::State& state) {
  const GridPtr g = Grid::cube(1, 1.0, static_cast<std::size_t>(state.range(0)));
  const DirichletProblem prob =
      make_problem(g, OrliczTriple(make_structure("power:p=3")), make_boundary("oscillatory", 1), 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(prob.u0, prob));
}
BENCHMARK(BM_EnergyGradient)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state) {
  const DirichletProblem prob = make_problem(Grid::cube(1, 1.0, 9), OrliczTriple(make_structure("power:p=3")),
                                             make_boundary("oscillatory", 1), 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(prob));
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
