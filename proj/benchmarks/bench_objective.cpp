#include <benchmark/benchmark.h>

#include <numeric>

#include "mlsat/fourier.hpp"
#include "mlsat/random.hpp"

using namespace mlsat;

namespace {

struct Instance {
  ObjectiveContext ctx;
  std::vector<double> point;
};

// One clause over all k variables at a uniform random point.
Instance single_clause(ClauseKind kind, int k, double bound) {
  Formula f;
  f.n = k;
  Clause c;
  c.kind = kind;
  c.threshold = kind == ClauseKind::CardGe ? k / 2 : 0;
  for (int v = 1; v <= k; ++v) c.literals.push_back({v, v % 3 == 0});
  f.clauses.push_back(c);
  Rng rng = make_rng(static_cast<std::uint64_t>(k));
  std::vector<double> a(static_cast<std::size_t>(k));
  for (auto& v : a) v = bound * uniform_pm1(rng);
  return {ObjectiveContext(f, {1.0}), std::move(a)};
}

void BM_Value(benchmark::State& state, ClauseKind kind, double bound) {
  const auto inst = single_clause(kind, static_cast<int>(state.range(0)), bound);
  for (auto _ : state) benchmark::DoNotOptimize(inst.ctx.value(inst.point));
  state.SetComplexityN(state.range(0));
}

void BM_Gradient(benchmark::State& state, ClauseKind kind, double bound) {
  const auto inst = single_clause(kind, static_cast<int>(state.range(0)), bound);
  std::vector<double> g(inst.point.size());
  for (auto _ : state) {
    inst.ctx.gradient(inst.point, g);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_Hessian(benchmark::State& state) {
  const auto inst = single_clause(ClauseKind::Cnf, static_cast<int>(state.range(0)), 0.8);
  std::vector<int> J(16);
  std::iota(J.begin(), J.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(inst.ctx.hessian_restricted(inst.point, J));
  state.SetComplexityN(state.range(0));
}

}  // namespace

// Interior points take the deflation path; points near the walls and
// mid-threshold cardinality clauses take the count-distribution path.
BENCHMARK_CAPTURE(BM_Value, cnf, ClauseKind::Cnf, 0.8)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(BM_Value, card, ClauseKind::CardGe, 1.0)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(BM_Gradient, cnf_interior, ClauseKind::Cnf, 0.8)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(BM_Gradient, cnf_walls, ClauseKind::Cnf, 1.0)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(BM_Gradient, card, ClauseKind::CardGe, 1.0)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(BM_Gradient, xor, ClauseKind::Xor, 0.8)->RangeMultiplier(2)->Range(16, 1024)->Complexity();
BENCHMARK(BM_Hessian)->RangeMultiplier(2)->Range(16, 512)->Complexity();
