#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "tinylca/data_store.hpp"
#include "tinylca/fleet.hpp"
#include "tinylca/growth.hpp"
#include "tinylca/report.hpp"
#include "tinylca/service.hpp"

namespace {

using namespace tinylca;

const Dataset& data() {
    static const Dataset d = load_dataset(TINYLCA_BENCH_DATA_DIR);
    return d;
}

void BM_TotalFootprint(benchmark::State& state) {
    const DeviceProfile& device = data().profile("high-cost");
    for (auto _ : state) benchmark::DoNotOptimize(total_footprint(device, Bound::High));
}
BENCHMARK(BM_TotalFootprint);

void BM_LifetimeSweep(benchmark::State& state) {
    FleetRequest req;
    req.reductions = {{"residential", 0.2}};
    const FleetScenario base = resolve_scenario(data(), req);
    std::vector<double> lifetimes(static_cast<std::size_t>(state.range(0)));
    std::iota(lifetimes.begin(), lifetimes.end(), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lifetime_sweep(base, data().profile("high-cost"), Bound::High, lifetimes));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LifetimeSweep)->Arg(10)->Arg(100)->Arg(1000);

void BM_FirstCrossing(benchmark::State& state) {
    const GrowthModel lin = default_linear_model();
    const GrowthModel ex = default_exponential_model();
    double t = 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(first_crossing(lin, t));
        benchmark::DoNotOptimize(first_crossing(ex, t));
        t = t > 1e6 ? 50.0 : t * 1.01;
    }
}
BENCHMARK(BM_FirstCrossing);

void BM_LoadDataset(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(load_dataset(TINYLCA_BENCH_DATA_DIR));
}
BENCHMARK(BM_LoadDataset);

void BM_ServiceHandle(benchmark::State& state) {
    static const WhatIfService service(load_dataset(TINYLCA_BENCH_DATA_DIR));
    const char* paths[] = {"/api/v1/footprint", "/api/v1/fleet/net", "/api/v1/project"};
    const char* bodies[] = {R"({"profile":"high-cost","bound":"high"})", R"({"reductions":{"residential":0.2}})",
                            R"({"model":"exponential"})"};
    const auto i = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(service.handle("POST", paths[i], bodies[i]));
}
BENCHMARK(BM_ServiceHandle)->DenseRange(0, 2)->ThreadRange(1, 4);

}  // namespace

BENCHMARK_MAIN();
