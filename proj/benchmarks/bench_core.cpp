#include <benchmark/benchmark.h>

#include "stneuron/diagnostics.hpp"
#include "stneuron/neuron.hpp"

using namespace stn;

namespace {

DriverConfig pinned_config(PhiBounds phi = {0.9, 1.1}) {
    return DriverConfig{ChaoticMap(MapKind::logistic, 4.0),
                        0.1,
                        {0.0, 1.0},
                        phi};
}

void bm_logistic_orbit(benchmark::State& state) {
    const ChaoticMap map(MapKind::logistic, 4.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_map(map, 0.1, 1000, n));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(bm_logistic_orbit)->Arg(10000)->Arg(100000);

void bm_cubic_orbit(benchmark::State& state) {
    const ChaoticMap map(MapKind::cubic, 2.9);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_map(map, 0.1, 1000, n));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(bm_cubic_orbit)->Arg(100000);

void bm_driver_step(benchmark::State& state) {
    TemporalDriver driver(pinned_config());
    double sink = 0.0;
    for (auto _ : state) {
        sink += driver.step();
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(bm_driver_step);

void bm_activation(benchmark::State& state) {
    double z = -8.0;
    double sink = 0.0;
    for (auto _ : state) {
        sink += activation(z, 1.05);
        z = z > 8.0 ? -8.0 : z + 1e-4;
    }
    benchmark::DoNotOptimize(sink);
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(bm_activation);

void bm_lyapunov(benchmark::State& state) {
    const ChaoticMap map(MapKind::logistic, 4.0);
    const Orbit orbit = iterate_map(map, 0.1, 1000, 100000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lyapunov_exponent(orbit.samples, map));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(orbit.samples.size()));
}
BENCHMARK(bm_lyapunov);

void bm_autocorrelation(benchmark::State& state) {
    const SpatioTemporalNeuron neuron{{1.0}, 0.0, pinned_config()};
    const Series out = generate(neuron, 1.0, 100000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(autocorrelation(out, 50));
    }
}
BENCHMARK(bm_autocorrelation);

void bm_train_epoch(benchmark::State& state) {
    const DriverConfig config = pinned_config({-2.7, 3.5});
    const SpatioTemporalNeuron teacher{{1.3}, -0.2, config};
    const VectorSeries inputs(2000, std::vector<double>{1.0});
    const Series target = forward(teacher, inputs);
    const SpatioTemporalNeuron student{{0.0}, 0.0, config};
    TrainConfig tc;
    tc.max_epochs = 1;
    tc.mse_tolerance = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(student, inputs, target, tc));
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(inputs.size()));
}
BENCHMARK(bm_train_epoch);

}  // namespace

BENCHMARK_MAIN();
