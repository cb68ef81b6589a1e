#include <benchmark/benchmark.h>

#include "mlsat/benchgen.hpp"
#include "mlsat/solver.hpp"

using namespace mlsat;

namespace {

void BM_SolveVertexCover(benchmark::State& state) {
  const auto g = gen_vertex_cover(static_cast<int>(state.range(0)), 1);
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g.formula, cfg).status);
}

void BM_SolveParity(benchmark::State& state) {
  const auto g = gen_parity_learning(static_cast<int>(state.range(0)), 0.25, 1);
  SolverConfig cfg;
  cfg.mode = SolveMode::Threshold;
  cfg.target_satisfied = g.target_satisfied;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g.formula, cfg).status);
}

void BM_SolveHybrid(benchmark::State& state) {
  const auto g = gen_random_hybrid(static_cast<int>(state.range(0)), 1.0, 0.2, 0.1, 0.5, 1);
  SolverConfig cfg;
  cfg.restarts = 20;
  cfg.mode = SolveMode::MaxSat;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g.formula, cfg).satisfied);
}

}  // namespace

BENCHMARK(BM_SolveVertexCover)->Arg(12)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParity)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveHybrid)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
