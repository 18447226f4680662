#include <benchmark/benchmark.h>

#include "muxdyn/generators.hpp"
#include "muxdyn/stats.hpp"

using namespace muxdyn;

namespace {

void BM_StatsReport(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = random_multiplex(n, 9, parse_generator_mix("er:0.05/ba:3/ws:6:0.1"), 2);
    for (auto _ : state) benchmark::DoNotOptimize(stats_report(m));
}
BENCHMARK(BM_StatsReport)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CliqueNumber(benchmark::State& state) {
    const auto g = generate_layer(ErdosRenyi{0.3}, 60, 3, "er");
    for (auto _ : state) benchmark::DoNotOptimize(clique_number(g));
}
BENCHMARK(BM_CliqueNumber);

}  // namespace
