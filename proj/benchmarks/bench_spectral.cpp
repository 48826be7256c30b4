#include <benchmark/benchmark.h>

#include "cyclic_qsim/circuit.hpp"
#include "cyclic_qsim/discretizer.hpp"
#include "cyclic_qsim/spectral.hpp"

namespace {

using namespace cqsim;

void BM_Discretize(benchmark::State& state) {
  const auto model = ShiftModel::gaussian(0.0, 0.01);
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(model, bits));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << bits));
}
BENCHMARK(BM_Discretize)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond);

void BM_DiscretizeAveraged(benchmark::State& state) {
  const auto model = ShiftModel::gaussian(0.0, 0.01);
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(model, bits, Discretization::Averaged));
}
BENCHMARK(BM_DiscretizeAveraged)->DenseRange(10, 16, 3)->Unit(benchmark::kMillisecond);

void BM_SpectrumDft(benchmark::State& state) {
  const auto col = discretize(ShiftModel::gaussian(0.0, 0.01), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quantum_memory_bits(col));
  state.SetComplexityN(static_cast<int64_t>(col.size()));
}
BENCHMARK(BM_SpectrumDft)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNLogN);

void BM_SpectrumDenseOracle(benchmark::State& state) {
  const auto col = discretize(ShiftModel::gaussian(0.0, 0.05), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dense_oracle_spectrum(col));
  state.SetComplexityN(static_cast<int64_t>(col.size()));
}
BENCHMARK(BM_SpectrumDenseOracle)->DenseRange(4, 9, 1)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_MeasuredStep(benchmark::State& state) {
  const auto mset = build_memory_states(discretize(ShiftModel::gaussian(0.0, 0.05), static_cast<int>(state.range(0))));
  const auto u = build_step_unitary(mset);
  auto sim = SimulatorState::prepare(mset, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(step_measured(sim, u));
}
BENCHMARK(BM_MeasuredStep)->DenseRange(1, 4, 1);

}  // namespace

BENCHMARK_MAIN();
