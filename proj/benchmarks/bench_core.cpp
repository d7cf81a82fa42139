#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cvqt/channels.hpp"
#include "cvqt/displacement.hpp"
#include "cvqt/distributions.hpp"
#include "cvqt/special_functions.hpp"

using namespace cvqt;

static void BM_LaguerreSequence(benchmark::State& state) {
    std::vector<double> out(state.range(0));
    for (auto _ : state) {
        laguerre_sequence(7, 12.5, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LaguerreSequence)->Arg(64)->Arg(512);

static void BM_DisplacementBlock(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    const int cols = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(displacement_block({2.0, -1.5}, rows, cols));
    }
    state.SetItemsProcessed(state.iterations() * (rows + 1) * (cols + 1));
}
BENCHMARK(BM_DisplacementBlock)->Args({2, 21})->Args({100, 20})->Args({300, 61});

static void BM_OracleExpm(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle_displacement_matrix({2.0, -1.5}, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_OracleExpm)->Arg(64)->Arg(128);

static void BM_ApplyTransfer(benchmark::State& state) {
    const ResourceSpectrum r = state.range(0) == 0 ? ResourceSpectrum::mend(21) : ResourceSpectrum::two_mode_squeezed(0.8);
    const FockVector psi = make_cat({0.0, 1.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_transfer(r, psi, {1.0, 2.0}));
    }
    state.SetLabel(r.label());
}
BENCHMARK(BM_ApplyTransfer)->Arg(0)->Arg(1);

static void BM_TransferMoments(benchmark::State& state) {
    const ResourceSpectrum r = state.range(0) == 0 ? ResourceSpectrum::mend(21) : ResourceSpectrum::two_mode_squeezed(0.8);
    const FockVector psi = make_cat({0.0, 1.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(transfer_moments(r, psi, {1.0, 2.0}));
    }
    state.SetLabel(r.label());
}
BENCHMARK(BM_TransferMoments)->Arg(0)->Arg(1);

static void BM_QubitGrid(benchmark::State& state) {
    const ResourceSpectrum r = ResourceSpectrum::mend(21);
    GridOptions options;
    options.threads = 1;
    const GridSpec spec = GridSpec::centered({}, 3.0, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_grid(r, QubitInput{1.0, 1.0}, spec, options));
    }
    state.SetItemsProcessed(state.iterations() * spec.size());
}
BENCHMARK(BM_QubitGrid)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
