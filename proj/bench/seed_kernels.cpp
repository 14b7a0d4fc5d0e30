#include <benchmark/benchmark.h>

#include "olg/equilibrium_set.hpp"

namespace {

olg::Economy continuum_economy() {
    olg::Economy e;
    e.endow_young = olg::SequenceGen::constant(2);
    e.endow_old = olg::SequenceGen::constant(1);
    e.dividend = olg::SequenceGen::geometric(0.01, 0.4);
    return e;
}

void seed_fates(benchmark::State& state, olg::Kernel kernel) {
    const auto e = continuum_economy();
    const auto seeds = olg::seed_grid(e);
    const long T = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(olg::seed_fates(e, seeds, T, kernel));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(seeds.size()) * T);
}

void survival(benchmark::State& state, olg::Kernel kernel) {
    const auto e = continuum_economy();
    for (auto _ : state) benchmark::DoNotOptimize(olg::survival_interval(e, state.range(0), kernel));
}

}  // namespace

BENCHMARK_CAPTURE(seed_fates, serial, olg::Kernel::Serial)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(seed_fates, parallel, olg::Kernel::Parallel)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(survival, serial, olg::Kernel::Serial)->Arg(200);
BENCHMARK_CAPTURE(survival, parallel, olg::Kernel::Parallel)->Arg(200);

BENCHMARK_MAIN();
