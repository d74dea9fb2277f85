#include <benchmark/benchmark.h>

#include <thread>

#include "skyrx/bounded_queue.hpp"

namespace {

// Producer/consumer handoff through a queue of the given capacity.
void BM_QueueHandoff(benchmark::State& state) {
    constexpr int kItems = 10000;
    for (auto _ : state) {
        skyrx::BoundedQueue<int> q(static_cast<std::size_t>(state.range(0)));
        std::thread producer([&] {
            for (int i = 0; i < kItems; ++i) q.push(i);
            q.close();
        });
        long sum = 0;
        while (auto v = q.pop()) sum += *v;
        producer.join();
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * kItems);
}
BENCHMARK(BM_QueueHandoff)->Arg(1)->Arg(3)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
