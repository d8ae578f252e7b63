// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include "qgol/blob.hpp"
#include "qgol/propagator.hpp"
#include "qgol/spectral_stats.hpp"
#include "qgol/study.hpp"

#include <benchmark/benchmark.h>

using namespace qgol;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

GenerationTrace classical_trace(int generations)
{
    const LatticeSpec spec(33);
    return run_classical(random_state(spec, 1), build_neighborhoods(spec), generations);
}

void BM_EvolveDensity(benchmark::State& state)
{
    const LatticeSpec spec(33);
    const auto m = HoppingSpectrum(build_single_particle(build_neighborhoods(spec))).transfer(0.1);
    const auto s = random_state(spec, 7);
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_density(m, s, exec));
}

void BM_TraceStats(benchmark::State& state)
{
    const auto trace = classical_trace(512);
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(trace_stats(trace, exec));
}

void BM_PowerSpectrum(benchmark::State& state)
{
    const auto trace = classical_trace(4096);
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(power_spectrum(trace, exec));
}

void BM_SuccessorTable(benchmark::State& state)
{
    const SmallBoard board(5, Boundary::periodic);
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(successor_table(board, exec));
}

void BM_Enumerate4(benchmark::State& state)
{
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_classical(4, Boundary::periodic, exec));
}

void BM_DeltaSurface(benchmark::State& state)
{
    const LatticeSpec spec(17);
    const std::vector<double> taus = {0.0, 0.1, 0.3};
    const std::vector<double> sigmas = {0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(delta_surface(spec, taus, sigmas, seeds, RuleReading::evolved, exec));
}

} // namespace

BENCHMARK(BM_EvolveDensity)->Arg(0)->Arg(1);
BENCHMARK(BM_TraceStats)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuccessorTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate4)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaSurface)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
