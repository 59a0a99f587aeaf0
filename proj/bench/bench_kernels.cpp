#include <benchmark/benchmark.h>

#include "delaycons/graph.hpp"
#include "delaycons/spectral.hpp"
#include "delaycons/sweep.hpp"

#include <vector>

using namespace delaycons;

namespace {

std::vector<double> grid(int tau, int count) {
    std::vector<double> xs;
    const double ub = stability_bound(tau);
    for (int i = 1; i <= count; ++i) xs.push_back(ub * i / (count + 1.0));
    return xs;
}

void BM_RhoGridSerial(benchmark::State& state) {
    const int tau = static_cast<int>(state.range(0));
    auto xs = grid(tau, 10000);
    for (auto _ : state) benchmark::DoNotOptimize(rho_grid_serial(xs, tau));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(xs.size()));
}

void BM_RhoGridParallel(benchmark::State& state) {
    const int tau = static_cast<int>(state.range(0));
    auto xs = grid(tau, 10000);
    for (auto _ : state) benchmark::DoNotOptimize(rho_grid(xs, tau));
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(xs.size()));
}

const std::vector<Strategy> kUniform{Strategy::UniformStandard, Strategy::UniformOptimal};

void BM_SweepSerial(benchmark::State& state) {
    auto base = gen_regular(static_cast<int>(state.range(0)), 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(base, DelayModel::linear(), kUniform));
}

void BM_SweepParallel(benchmark::State& state) {
    auto base = gen_regular(static_cast<int>(state.range(0)), 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sweep(base, DelayModel::linear(), kUniform));
}

} // namespace

BENCHMARK(BM_RhoGridSerial)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhoGridParallel)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
