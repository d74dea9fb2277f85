#include <benchmark/benchmark.h>

#include "common.hpp"
#include "skyrx/calibrate.hpp"
#include "skyrx/rx.hpp"

namespace {

skyrx::RadianceCube binned(std::uint32_t lines) {
    auto syn = bench::slice(lines);
    return skyrx::calibrate_and_bin(syn.cube(0).cube, syn.tables());
}

void BM_RxStats(benchmark::State& state) {
    const auto c = binned(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::compute_stats(c));
    state.SetItemsProcessed(state.iterations() * state.range(0) * c.samples());
}
BENCHMARK(BM_RxStats)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RxScores(benchmark::State& state) {
    const auto c = binned(static_cast<std::uint32_t>(state.range(0)));
    const auto stats = skyrx::compute_stats(c);
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::rx_scores(c, stats));
    state.SetItemsProcessed(state.iterations() * state.range(0) * c.samples());
}
BENCHMARK(BM_RxScores)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
