#include <benchmark/benchmark.h>

#include "wealthmix/branches.hpp"
#include "wealthmix/estimation.hpp"
#include "wealthmix/gof.hpp"
#include "wealthmix/mixture.hpp"
#include "wealthmix/sample.hpp"

namespace {

using namespace wealthmix;

MixtureParams kgen1984() {
    return MixtureParams(0.068, 0.043, WeibullNegParams(0.578, 4511.0),
                         KappaGenParams(0.718, 76514.0, 0.374));
}

void BM_MixturePdf(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    double w = -20000.0;
    for (auto _ : state) {
        w = w >= 400000.0 ? -20000.0 : w + 137.3;
        benchmark::DoNotOptimize(mixture_pdf(m, w));
    }
}
BENCHMARK(BM_MixturePdf);

void BM_MixtureCdf(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    double w = -20000.0;
    for (auto _ : state) {
        w = w >= 400000.0 ? -20000.0 : w + 137.3;
        benchmark::DoNotOptimize(mixture_cdf(m, w));
    }
}
BENCHMARK(BM_MixtureCdf);

void BM_MixtureQuantile(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    double u = 0.5;
    for (auto _ : state) {
        u += 0.000917;
        if (u >= 0.9995) u -= 0.999;
        benchmark::DoNotOptimize(mixture_quantile(m, u));
    }
}
BENCHMARK(BM_MixtureQuantile);

void BM_Lorenz(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    double u = 0.5;
    for (auto _ : state) {
        u += 0.000917;
        if (u >= 0.9995) u -= 0.999;
        benchmark::DoNotOptimize(mixture_lorenz(m, u));
    }
}
BENCHMARK(BM_Lorenz);

void BM_GiniClosed(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    for (auto _ : state) benchmark::DoNotOptimize(mixture_gini_closed(m));
}
BENCHMARK(BM_GiniClosed);

void BM_GiniNumeric(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    for (auto _ : state) benchmark::DoNotOptimize(mixture_gini_numeric(m));
}
BENCHMARK(BM_GiniNumeric)->Unit(benchmark::kMicrosecond);

void BM_FitMixture(benchmark::State& state) {
    const WeightedSample sample = mixture_sample(kgen1984(), 4000, 99);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_mixture(sample, Family::KappaGen));
}
BENCHMARK(BM_FitMixture)->Unit(benchmark::kMillisecond);

void BM_AndersonDarling(benchmark::State& state) {
    const MixtureParams m = kgen1984();
    const WeightedSample sample = mixture_sample(m, 2000, 7);
    for (auto _ : state) benchmark::DoNotOptimize(anderson_darling(sample, m));
}
BENCHMARK(BM_AndersonDarling)->Unit(benchmark::kMicrosecond);

}  // namespace
