#include <benchmark/benchmark.h>

#include "maxent/maxent.hpp"

using namespace maxent;

namespace {

ConstraintSpec mean_is(double b, int k = 1) {
  return ConstraintSpec::equality(ConstraintFunction::power(k), b);
}

void BM_LogPartition(benchmark::State& state) {
  const auto s = Support::continuous(-4, 4, static_cast<int>(state.range(0)));
  const std::vector<ConstraintFunction> f{ConstraintFunction::power(1), ConstraintFunction::power(2)};
  const std::vector<double> l{0.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(log_partition(s, f, l));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogPartition)->RangeMultiplier(4)->Range(256, 16384);

void BM_SolveGaussian(benchmark::State& state) {
  const Problem p{Support::continuous(-4, 4, static_cast<int>(state.range(0))), {mean_is(0.3), mean_is(1.2, 2)}};
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveGaussian)->Arg(1024)->Arg(8192);

void BM_SolveInterval(benchmark::State& state) {
  const Problem p{Support::continuous(0, 5),
                  {ConstraintSpec::bounded(ConstraintFunction::power(1), 0.8, 1.2),
                   ConstraintSpec::bounded(ConstraintFunction::power(2), 0.0, 1.5)}};
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveInterval);

void BM_Assessments(benchmark::State& state) {
  const std::vector<Assessment> a{{1, 0.3}, {2, 0.55}, {5, 0.9}, {8, 0.97}};
  const auto s = Support::continuous(0, 10);
  for (auto _ : state) benchmark::DoNotOptimize(maxent_utility_from_assessments(s, a));
}
BENCHMARK(BM_Assessments);

void BM_RiskProfile(benchmark::State& state) {
  const auto r = maxent_utility({Support::continuous(-4, 4), {mean_is(0.0), mean_is(1.0, 2)}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(risk_aversion_analytic(r.solution));
    benchmark::DoNotOptimize(risk_aversion_numeric(r.curve));
  }
}
BENCHMARK(BM_RiskProfile);

}  // namespace

BENCHMARK_MAIN();
