#include <benchmark/benchmark.h>

#include "breather/closed_forms.hpp"
#include "breather/evolution.hpp"
#include "breather/experiments.hpp"
#include "breather/linearized.hpp"
#include "breather/spectral.hpp"

using namespace mkdv;

namespace {

GridSpec grid(benchmark::State& state) {
    return GridSpec::make(30.0, static_cast<std::size_t>(state.range(0)));
}

void BM_Derivative(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field b = breather({1.0, 1.0}, 0.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(derivative(b, 4));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Derivative)->RangeMultiplier(2)->Range(512, 8192)->Complexity(benchmark::oNLogN);

void BM_Breather(benchmark::State& state) {
    const GridSpec g = grid(state);
    for (auto _ : state) benchmark::DoNotOptimize(breather({1.0, 1.0}, 0.3, g));
}
BENCHMARK(BM_Breather)->Arg(2048);

void BM_ScaleDerivative(benchmark::State& state) {
    const GridSpec g = grid(state);
    for (auto _ : state) benchmark::DoNotOptimize(breather_dscale({1.0, 1.0}, 0.3, g, Scale::alpha));
}
BENCHMARK(BM_ScaleDerivative)->Arg(2048);

void BM_Rhs(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field b = breather({1.0, 1.0}, 0.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(rhs(b));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(2)->Range(512, 4096);

void BM_Evolve100Steps(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field b = breather({1.0, 1.0}, 0.0, g);
    EvolutionConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 100 * cfg.dt;
    cfg.output_stride = 100;
    cfg.scheme = static_cast<Scheme>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(evolve(b, cfg));
}
BENCHMARK(BM_Evolve100Steps)
    ->Args({2048, static_cast<int>(Scheme::etdrk4)})
    ->Args({2048, static_cast<int>(Scheme::etdrk4_ho)})
    ->Args({2048, static_cast<int>(Scheme::ifrk4)})
    ->Unit(benchmark::kMillisecond);

void BM_ApplyL(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field b = breather({1.0, 1.0}, 0.0, g);
    const Field z = breather_dshift({1.0, 1.0}, 0.0, g, Shift::x1);
    for (auto _ : state) benchmark::DoNotOptimize(apply_L(z, b, 1.0, 1.0));
}
BENCHMARK(BM_ApplyL)->Arg(2048);

void BM_AssembleL(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field b = breather({1.0, 1.0}, 0.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_L(g, b, 1.0, 1.0));
}
BENCHMARK(BM_AssembleL)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
    const GridSpec g = grid(state);
    const OperatorMatrix m = assemble_L(g, breather({1.0, 1.0}, 0.0, g), 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(m, 10));
}
BENCHMARK(BM_Spectrum)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_FitShifts(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Field u = breather({1.0, 1.0}, 0.0, g) + make_perturbation(7, 1e-3, 6.0, g);
    for (auto _ : state) benchmark::DoNotOptimize(fit_shifts(u, 0.0, 1.0, 1.0, {0.0, 0.0}));
}
BENCHMARK(BM_FitShifts)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
