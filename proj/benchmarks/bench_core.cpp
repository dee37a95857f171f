#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "ringstab/analytics.hpp"
#include "ringstab/mcn.hpp"
#include "ringstab/params.hpp"
#include "ringstab/ring.hpp"
#include "ringstab/transient.hpp"
#include "ringstab/uniform_field.hpp"

namespace {

ringstab::ParameterSetting uniform_setting(int L, double hazard, double rate) {
  ringstab::Matrix q(static_cast<std::size_t>(L), static_cast<std::size_t>(L), hazard);
  std::vector<double> p(static_cast<std::size_t>(L), rate);
  return ringstab::ParameterSetting::create(L, std::move(p), std::move(q));
}

void BM_UniformField(benchmark::State& state) {
  const ringstab::UniformField field(42, 16);
  std::int64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field.u(3, 7, t));
    ++t;
  }
}
BENCHMARK(BM_UniformField);

void BM_RingStep(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto ps = uniform_setting(L, 0.4, 0.1);
  const ringstab::UniformField field(1, L);
  ringstab::RingState current = ringstab::RingState::empty(L);
  ringstab::RingState scratch = current;
  std::int64_t t = 0;
  for (auto _ : state) {
    ringstab::step_into(current, ps, field, t++, scratch);
    std::swap(current, scratch);
  }
  state.SetItemsProcessed(state.iterations() * L);
}
BENCHMARK(BM_RingStep)->Arg(2)->Arg(8)->Arg(32);

void BM_McnStep(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto ps = uniform_setting(L, 0.4, 0.1);
  const ringstab::UniformField field(1, L);
  ringstab::McnState current = ringstab::McnState::empty(L);
  ringstab::McnState scratch = current;
  std::int64_t t = 0;
  for (auto _ : state) {
    ringstab::step_mcn_into(current, ps, field, t++, scratch);
    std::swap(current, scratch);
  }
  state.SetItemsProcessed(state.iterations() * L);
}
BENCHMARK(BM_McnStep)->Arg(2)->Arg(8)->Arg(32);

void BM_VisitMatrix(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto ps = uniform_setting(L, 0.4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(ringstab::visit_matrix(ps));
}
BENCHMARK(BM_VisitMatrix)->Arg(2)->Arg(8)->Arg(32);

void BM_TrafficSolution(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto ps = uniform_setting(L, 0.4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(ringstab::traffic_solution(ps));
}
BENCHMARK(BM_TrafficSolution)->Arg(2)->Arg(8)->Arg(16);

void BM_FixedPoint(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto ps = uniform_setting(L, 0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(ringstab::solve_fixed_point(ps));
}
BENCHMARK(BM_FixedPoint)->Arg(2)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
