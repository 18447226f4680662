#include <benchmark/benchmark.h>

#include "muxdyn/coupling.hpp"
#include "muxdyn/dynamics.hpp"
#include "muxdyn/generators.hpp"
#include "muxdyn/spectral.hpp"

using namespace muxdyn;

namespace {

Multiplex sample(std::size_t n, std::size_t k) {
    return random_multiplex(n, k, parse_generator_mix("er:0.05/ba:3/ws:6:0.1"), 1);
}

void BM_MakeOperator(benchmark::State& state) {
    const auto m = sample(static_cast<std::size_t>(state.range(0)), 9);
    const auto scheme = scheme_equidistribution(m);
    for (auto _ : state) benchmark::DoNotOptimize(make_operator(m, scheme, DynamicsKind::random_walk));
}
BENCHMARK(BM_MakeOperator)->Arg(20)->Arg(100)->Arg(400);

void BM_DenseSpectrum(benchmark::State& state) {
    const auto m = sample(static_cast<std::size_t>(state.range(0)), 3);
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::laplacian);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(op.op));
}
BENCHMARK(BM_DenseSpectrum)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_IterativeLeading(benchmark::State& state) {
    const auto m = sample(1000, 3);
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::random_walk, 0);
    SpectrumOptions o;
    o.dense_limit = 0;
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(op.op, o));
}
BENCHMARK(BM_IterativeLeading)->Unit(benchmark::kMillisecond);

void BM_Prop1Check(benchmark::State& state) {
    const auto m = sample(30, 3);
    for (auto _ : state) benchmark::DoNotOptimize(check_prop1(m, DynamicsKind::laplacian));
}
BENCHMARK(BM_Prop1Check)->Unit(benchmark::kMillisecond);

void BM_WalkStationary(benchmark::State& state) {
    const auto m = sample(100, 9);
    const auto op = make_operator(m, scheme_equidistribution(m), DynamicsKind::random_walk);
    const auto dim = static_cast<Eigen::Index>(op.op.dim());
    const Vector v0 = Vector::Constant(dim, 1.0 / static_cast<double>(dim));
    for (auto _ : state) benchmark::DoNotOptimize(walk_stationary(op.op, v0));
}
BENCHMARK(BM_WalkStationary)->Unit(benchmark::kMillisecond);

}  // namespace
