#include <benchmark/benchmark.h>

#include "rlab/congruence.hpp"
#include "rlab/pipeline.hpp"
#include "rlab/testfn.hpp"
#include "rlab/zeros.hpp"

using namespace rlab;

static void BM_FredholmEval(benchmark::State& state) {
    ZetaEvaluator z(three_funnel(2, 2, 2), ZetaMode::fredholm, static_cast<int>(state.range(0)));
    Complex s(0.2, 3.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(z(s));
        s += Complex(1e-9, 0);
    }
}
BENCHMARK(BM_FredholmEval)->Arg(16)->Arg(32)->Arg(48)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_CycleEval(benchmark::State& state) {
    ZetaEvaluator z(bundled_integer_surface(), ZetaMode::cycle, static_cast<int>(state.range(0)));
    Complex s(0.2, 1.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(z(s));
        s += Complex(1e-9, 0);
    }
}
BENCHMARK(BM_CycleEval)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

static void BM_ZerosSmallBox(benchmark::State& state) {
    SchottkySurface s = bundled_integer_surface();
    ZetaEvaluator z(s, ZetaMode::fredholm, 16);
    for (auto _ : state) benchmark::DoNotOptimize(zeros_in_box(z, Box{-0.5, 0.5, 0, 2}).count());
}
BENCHMARK(BM_ZerosSmallBox)->Unit(benchmark::kMillisecond);

static void BM_LengthSpectrum(benchmark::State& state) {
    SchottkySurface s = three_funnel(2, 2, 2);
    double cutoff = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(length_spectrum(s, cutoff).entries.size());
}
BENCHMARK(BM_LengthSpectrum)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PsiHatProduct(benchmark::State& state) {
    SincProductProfile p = build_profile(0.5, 512);
    double x = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(psi_hat_product(p, Complex(x, 0.5)));
        x += 1e-3;
    }
}
BENCHMARK(BM_PsiHatProduct);

static void BM_CongruenceCheck(benchmark::State& state) {
    CongruenceContext ctx = make_congruence_context(bundled_integer_surface(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(trace_congruence_check(ctx, static_cast<int>(state.range(0))).violations);
}
BENCHMARK(BM_CongruenceCheck)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
