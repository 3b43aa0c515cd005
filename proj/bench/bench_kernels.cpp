// Serial reference vs OpenMP versions of the hot kernels.
#include <benchmark/benchmark.h>

#include "gml/dpp.hpp"
#include "gml/linalg.hpp"
#include "gml/matrix_models.hpp"
#include "gml/parallel.hpp"

namespace {

gml::Exec exec_of(const benchmark::State& st) { return st.range(1) ? gml::Exec::parallel : gml::Exec::serial; }

void BM_Tridiagonalize(benchmark::State& st) {
    const gml::GueMatrix g = gml::sample_gue(static_cast<int>(st.range(0)), 42);
    for (auto _ : st) {
        gml::DenseMatrix<gml::cplx> A = g.H;
        benchmark::DoNotOptimize(gml::tridiagonalize(A, exec_of(st)));
    }
}
BENCHMARK(BM_Tridiagonalize)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EigenVectors(benchmark::State& st) {
    const gml::GueMatrix g = gml::sample_gue(static_cast<int>(st.range(0)), 43);
    for (auto _ : st) benchmark::DoNotOptimize(gml::eigh(g.H, true, exec_of(st)));
}
BENCHMARK(BM_EigenVectors)->ArgsProduct({{256}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TwoRowTrials(benchmark::State& st) {
    const int N = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto r = gml::run_trials(
            256, 1, 7, [&](long, gml::Philox& rng) { return gml::sample_two_row(N, N / 2, 2, rng).top[0]; }, exec_of(st));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_TwoRowTrials)->ArgsProduct({{400}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ComplementVariance(benchmark::State& st) {
    const gml::KernelSpec k = gml::KernelSpec::normalized_gue(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(gml::complement_variance(k, {-INFINITY, 0.0}));
}
BENCHMARK(BM_ComplementVariance)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
