#include <benchmark/benchmark.h>

#include <random>

#include "skyrx/fec.hpp"
#include "skyrx/packet.hpp"

namespace {

std::vector<skyrx::Frame> group() {
    std::mt19937_64 rng(1);
    std::vector<skyrx::Frame> data;
    for (std::uint32_t i = 0; i < skyrx::kFecData; ++i) {
        skyrx::Frame f{0, static_cast<std::uint8_t>(i), skyrx::FrameKind::Data,
                       std::vector<std::uint8_t>(skyrx::kPacketBytes)};
        for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng());
        data.push_back(std::move(f));
    }
    return data;
}

void BM_FecEncode(benchmark::State& state) {
    const auto data = group();
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::fec_encode(data));
    state.SetBytesProcessed(state.iterations() * skyrx::kFecData * skyrx::kPacketBytes);
}
BENCHMARK(BM_FecEncode)->Unit(benchmark::kMicrosecond);

// Decode with the first `erasures` data frames missing.
void BM_FecDecode(benchmark::State& state) {
    auto all = group();
    for (auto& p : skyrx::fec_encode(all)) all.push_back(std::move(p));
    all.erase(all.begin(), all.begin() + state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(skyrx::fec_decode(all));
    state.SetBytesProcessed(state.iterations() * skyrx::kFecData * skyrx::kPacketBytes);
}
BENCHMARK(BM_FecDecode)->Arg(0)->Arg(5)->Arg(25)->Unit(benchmark::kMicrosecond);

}  // namespace
