#include <benchmark/benchmark.h>

#include <cmath>

#include "magma/grid.hpp"

namespace {

magma::Field smooth(const magma::TorusGrid& g) {
    return magma::Field::sample(g, [](auto x) {
        double v = 1.0;
        for (double xi : x) v += 0.1 * std::sin(xi);
        return v;
    });
}

void bm_spectral_derivative(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    auto g = magma::TorusGrid::cube(d, static_cast<std::size_t>(state.range(1)));
    auto f = smooth(g);
    for (auto _ : state) benchmark::DoNotOptimize(magma::spectral_derivative(f, d - 1));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(bm_spectral_derivative)->Args({1, 256})->Args({2, 128})->Args({3, 32})->Args({3, 64})
    ->Unit(benchmark::kMicrosecond);

void bm_hs_norm(benchmark::State& state) {
    auto g = magma::TorusGrid::cube(2, static_cast<std::size_t>(state.range(0)));
    auto f = smooth(g);
    for (auto _ : state) benchmark::DoNotOptimize(magma::hs_norm(f, 5.0));
}
BENCHMARK(bm_hs_norm)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
