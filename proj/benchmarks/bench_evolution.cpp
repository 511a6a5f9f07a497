#include <benchmark/benchmark.h>

#include <cmath>

#include "magma/evolution.hpp"

namespace {

void bm_step_rk4(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    auto g = magma::TorusGrid::cube(d, static_cast<std::size_t>(state.range(1)), 60.0);
    auto phi = magma::Field::sample(g, [](auto x) {
        double r2 = 0.0;
        for (double xi : x) r2 += (xi - 30.0) * (xi - 30.0);
        return 1.0 + 0.5 * std::exp(-r2 / 16.0);
    });
    magma::EvolveConfig cfg;
    cfg.n_exponent = 2.5;
    for (auto _ : state) benchmark::DoNotOptimize(magma::step_rk4(phi, 0.1, cfg));
}
BENCHMARK(bm_step_rk4)->Args({1, 256})->Args({2, 64})->Args({2, 128})->Unit(benchmark::kMillisecond);

}  // namespace
