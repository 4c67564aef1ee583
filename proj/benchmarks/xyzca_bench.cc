#include <random>

#include "benchmark/benchmark.h"
#include "xyzca/dynamics.h"
#include "xyzca/exact_decoder.h"
#include "xyzca/experiments.h"
#include "xyzca/gf2.h"
#include "xyzca/rg_decoder.h"

using namespace xyzca;

static void BM_Rule108Step(benchmark::State &state) {
    std::mt19937_64 rng(1);
    auto n = static_cast<std::size_t>(state.range(0));
    BitRow row(n);
    for (std::size_t i = 0; i < n; i++) {
        row.set(i, rng() & 1);
    }
    for (auto _ : state) {
        row = rule108_step(row);
        benchmark::DoNotOptimize(row);
    }
}
BENCHMARK(BM_Rule108Step)->Arg(48)->Arg(192)->Arg(1536);

static void BM_CycleLength(benchmark::State &state) {
    auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cycle_length_from_single_one(n));
    }
}
BENCHMARK(BM_CycleLength)->Arg(48)->Arg(192);

static void BM_ExactDecode(benchmark::State &state) {
    auto L = static_cast<std::size_t>(state.range(0));
    ExactDecoder dec(build_lattice(L, L + 3));
    std::mt19937_64 rng(2);
    std::vector<Syndrome> syndromes;
    for (int k = 0; k < 64; k++) {
        syndromes.push_back(syndrome(iid_sample_error(dec.dims(), 0, 0.05, rng)));
    }
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dec.decode(syndromes[k++ % syndromes.size()]));
    }
}
BENCHMARK(BM_ExactDecode)->Arg(12)->Arg(48)->Unit(benchmark::kMicrosecond);

static void BM_RgDecode(benchmark::State &state) {
    auto L = static_cast<std::size_t>(state.range(0));
    auto d = build_lattice(L, L + 3);
    std::mt19937_64 rng(3);
    std::vector<Syndrome> syndromes;
    for (int k = 0; k < 64; k++) {
        syndromes.push_back(syndrome(iid_sample_error(d, 0.005, 0.045, rng)));
    }
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rg_decode(syndromes[k++ % syndromes.size()], d));
    }
}
BENCHMARK(BM_RgDecode)->Arg(12)->Arg(48)->Unit(benchmark::kMicrosecond);

static void BM_EngineStep(benchmark::State &state) {
    auto L = static_cast<std::size_t>(state.range(0));
    auto engine = init_engine(build_lattice(L, L + 3), NoiseParams::from_total_rate(0.01, 100), true, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.step());
    }
}
BENCHMARK(BM_EngineStep)->Arg(12)->Arg(48);

BENCHMARK_MAIN();
