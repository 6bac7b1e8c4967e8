#include <benchmark/benchmark.h>

#include "bellsim/ft.h"
#include "bellsim/logical.h"
#include "bellsim/loss.h"
#include "bellsim/photonic.h"
#include "bellsim/rng.h"

using namespace bellsim;

static void BM_DeriveTable(benchmark::State& state) {
    auto net = build_bs_network();
    for (auto _ : state) {
        benchmark::DoNotOptimize(derive_bs_table(net));
    }
}
BENCHMARK(BM_DeriveTable);

static void BM_LogicalBmSample(benchmark::State& state) {
    const int n = int(state.range(0));
    auto rng = trial_rng(1, 0, 0);
    LogicalBellLabel label{BellFamily::Phi, BellSign::Minus, n};
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_logical_bell(label, rng));
    }
}
BENCHMARK(BM_LogicalBmSample)->Arg(4)->Arg(8)->Arg(16);

static void BM_LossMc(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_bm_success_lossy(8, 0.1, 10000, 3));
    }
}
BENCHMARK(BM_LossMc);

static void BM_TelecorrectionRound(benchmark::State& state) {
    auto circuit = default_telecorrection_circuit();
    auto rates = level1_error_model(4, 1e-3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_round(rates, circuit, 2000, 5));
    }
}
BENCHMARK(BM_TelecorrectionRound);

BENCHMARK_MAIN();
