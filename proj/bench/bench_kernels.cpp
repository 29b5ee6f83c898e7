#include "dshell/levels.hpp"
#include "dshell/limitcheck.hpp"
#include "dshell/wavefun.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace dshell;

namespace {

const OscillatorParams kOsc{1.0, 1.0, -1};

std::vector<double> energies(int n) {
  std::vector<double> E;
  for (int i = 0; i < n; ++i)
    E.push_back(-4.9 + 9.8 * (i + 0.5) / n);
  return E;
}

template <class Scan>
void trace_scan(benchmark::State &state, Scan scan) {
  const auto E = energies(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(scan(kOsc, 1.0, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Kernel>
void density(benchmark::State &state, Kernel kernel) {
  const auto shell = ShellParams::make(1.0, M_PI / 4);
  const auto levels = find_levels(kOsc, shell, -4.0, 4.0);
  const double E = levels.levels.at(3).E;
  const PerturbedState s(kOsc, shell, E);
  const auto prof = density_profile(kOsc, shell, E, default_r_max(kOsc, 1.0, E), int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel(s, prof.grid, prof.side));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void convergence(benchmark::State &state, bool parallel) {
  for (auto _ : state)
    benchmark::DoNotOptimize(convergence_study(kOsc, PeakShape::Gaussian, 1.0, M_PI / 4, 1.5,
                                               default_widths(), parallel));
}

} // namespace

BENCHMARK_CAPTURE(trace_scan, serial, trace_scan_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(trace_scan, parallel, trace_scan_parallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(density, serial, density_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(density, parallel, density_parallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(convergence, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(convergence, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
