// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "casimir/chebyshev.hpp"
#include "casimir/corrugation.hpp"
#include "casimir/kernels.hpp"
#include "casimir/lifshitz.hpp"

using namespace casimir;

namespace {

const MaterialKind gold = PlasmaModel(136e-9);
const CorrugatedGeometry experiment{221e-9, 1.2e-6, 59e-9, 8e-9, 1e-4};

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

QuadratureSettings settings_for(const benchmark::State& state) {
  QuadratureSettings s;
  s.execution = mode(state);
  return s;
}

void BM_EnergySweep(benchmark::State& state) {
  const auto settings = settings_for(state);
  std::vector<double> out;
  for (auto _ : state) {
    kernels::generate(mode(state), 16, out, [&](std::size_t i) {
      return energy_per_area(gold, 100e-9 + 50e-9 * double(i), settings).value;
    });
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_EnergyTable(benchmark::State& state) {
  const auto settings = settings_for(state);
  for (auto _ : state) {
    auto table = ChebyshevInterpolant::build(
        [&](double d) { return energy_per_area(gold, d, settings).value; }, 154e-9, 288e-9, 1e-9, 512,
        mode(state));
    benchmark::DoNotOptimize(table.degree());
  }
}

void BM_AmplitudeScan(benchmark::State& state) {
  const CorrugationModel model(experiment, gold, settings_for(state));
  for (auto _ : state) benchmark::DoNotOptimize(model.complete_amplitude_sphere().amplitude);
}

}  // namespace

BENCHMARK(BM_EnergySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnergyTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AmplitudeScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
