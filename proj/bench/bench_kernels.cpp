// Serial reference against OpenMP kernels. Run with OMP_NUM_THREADS set to compare.
#include "dosx/bump.hpp"
#include "dosx/dos.hpp"
#include "dosx/expansion.hpp"
#include "dosx/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace dosx;

namespace {

const Model& desk() {
    static const double warm = chi_hat(0.0) + chi_hat_decay_constant(8); // builds the lazy tables
    (void)warm;
    static const Model m{BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), WeightDistribution::uniform_zero_one()};
    return m;
}

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::parallel : Execution::serial; }

void set_label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_ExpectResolvent(benchmark::State& st) {
    const auto psi = WaveVector::plane_wave(Momentum(0));
    for (auto _ : st) benchmark::DoNotOptimize(expect_resolvent(desk(), 0.1, {1.0, 0.5}, psi, psi, 4000, 1, mode(st)));
    set_label(st);
}

void BM_TSeries(benchmark::State& st) {
    const auto psi = WaveVector::plane_wave(Momentum(1));
    for (auto _ : st) benchmark::DoNotOptimize(build_t_series(3, desk(), psi, psi, mode(st)));
    set_label(st);
}

void BM_SmoothingIntegrals(benchmark::State& st) {
    const auto psi = WaveVector::plane_wave(Momentum(1));
    const auto series = build_t_series(2, desk(), psi, psi);
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    for (auto _ : st) {
        SmoothingIntegrator integ(w, desk().box.L()); // fresh cache each round
        benchmark::DoNotOptimize(integ.smooth(series, mode(st)));
    }
    set_label(st);
}

void BM_DosDirect(benchmark::State& st) {
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    w.lambda = 0.1;
    const DosRequest req{w, 3.0, 2, 1000, 7};
    for (auto _ : st) benchmark::DoNotOptimize(dos_direct(req, desk(), mode(st)));
    set_label(st);
}

} // namespace

BENCHMARK(BM_ExpectResolvent)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TSeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothingIntegrals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DosDirect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
