#include <benchmark/benchmark.h>

#include "illusim/coloring.hpp"
#include "illusim/instances.hpp"
#include "illusim/partition.hpp"
#include "illusim/rng.hpp"
#include "illusim/illusion.hpp"
#include "illusim/sampler.hpp"

namespace {

using namespace illusim;

void BM_PhiloxDraw(benchmark::State& state) {
    std::uint64_t counter = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(uniform_draw(42, 7, counter++));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxDraw);

void BM_SequentialSweep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const IsingModel model = make_grid_model(side, side);
    SpinState spins = initial_state(model.size(), 1);
    SpinRng rng(1, model.size());
    for (auto _ : state) {
        sequential_sweep(model, spins, 0.4, rng);
    }
    state.SetItemsProcessed(state.iterations() * model.size());
}
BENCHMARK(BM_SequentialSweep)->Arg(32)->Arg(64);

void BM_ChromaticSweep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const IsingModel model = make_grid_model(side, side);
    const Coloring coloring = greedy_coloring(model);
    SpinState spins = initial_state(model.size(), 1);
    SpinRng rng(1, model.size());
    for (auto _ : state) {
        chromatic_sweep(model, spins, 0.4, coloring, rng);
    }
    state.SetItemsProcessed(state.iterations() * model.size());
}
BENCHMARK(BM_ChromaticSweep)->Arg(32)->Arg(64);

void BM_Partition(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const IsingModel model = make_grid_model(side, side);
    PartitionSpec spec;
    spec.num_parts = 4;
    spec.epsilon = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(partition(model, spec));
    }
}
BENCHMARK(BM_Partition)->Arg(16)->Arg(32);

void BM_SyncIllusionRun(benchmark::State& state) {
    const int side = 32;
    const IsingModel model = make_grid_model(side, side);
    PartitionSpec pspec;
    pspec.num_parts = static_cast<int>(state.range(0));
    pspec.epsilon = 0.05;
    const PartitionResult part = partition(model, pspec);
    InterconnectConfig net;
    net.exchange_interval = 4;
    const IllusionSystem system =
        build_system(model, part, ChipConfig{}, net, ScheduleMode::Synchronous);
    SamplerConfig cfg;
    cfg.kernel = Kernel::ChromaticGibbs;
    cfg.schedule = BetaSchedule::constant(0.4);
    cfg.sweeps = 50;
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sync_run(system, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.sweeps * model.size());
}
BENCHMARK(BM_SyncIllusionRun)->Arg(2)->Arg(8);

void BM_ExactBoltzmann(benchmark::State& state) {
    const IsingModel model =
        make_random_model(static_cast<int>(state.range(0)), 11,
                          {.density = 0.3, .coupling_scale = 1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_boltzmann(model, 0.5));
    }
}
BENCHMARK(BM_ExactBoltzmann)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
