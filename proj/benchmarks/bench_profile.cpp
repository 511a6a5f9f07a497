#include <benchmark/benchmark.h>

#include "magma/profile.hpp"

namespace {

void bm_shot(benchmark::State& state) {
    magma::profile::ProfileParams p{3.0, 2.5, 1.7, -0.021};
    for (auto _ : state) benchmark::DoNotOptimize(magma::profile::integrate_shot(p));
}
BENCHMARK(bm_shot)->Unit(benchmark::kMicrosecond);

void bm_find_mu_c(benchmark::State& state) {
    magma::profile::ProfileParams p{static_cast<double>(state.range(0)), 2.5, 1.7, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(magma::profile::find_mu_c(p));
}
BENCHMARK(bm_find_mu_c)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
