#include <benchmark/benchmark.h>

#include "common.hpp"
#include "skyrx/calibrate.hpp"

namespace {

void BM_CalibrateAndBin(benchmark::State& state) {
    auto syn = bench::slice(static_cast<std::uint32_t>(state.range(0)));
    const auto raw = syn.cube(0).cube;
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::calibrate_and_bin(raw, syn.tables()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CalibrateAndBin)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ExtractRgb(benchmark::State& state) {
    auto syn = bench::slice(50);
    const auto rad = skyrx::discard_oob_bands(skyrx::apply_calibration(syn.cube(0).cube, syn.tables()));
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::extract_rgb(rad));
}
BENCHMARK(BM_ExtractRgb)->Unit(benchmark::kMillisecond);

}  // namespace
