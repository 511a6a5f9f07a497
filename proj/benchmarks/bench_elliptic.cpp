#include <benchmark/benchmark.h>

#include <cmath>

#include "magma/elliptic.hpp"

namespace {

struct Setup {
    magma::TorusGrid grid;
    magma::Field a, g;
    explicit Setup(std::size_t n)
        : grid(magma::TorusGrid::cube(2, n)),
          a(magma::Field::sample(grid, [](auto x) { return 2.0 + 0.5 * std::sin(x[0] + x[1]); })),
          g(magma::Field::sample(grid, [](auto x) { return std::sin(x[0]) * std::cos(x[1]); })) {}
};

void bm_apply_elliptic(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(magma::apply_elliptic(s.a, s.g));
}
BENCHMARK(bm_apply_elliptic)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void bm_solve_elliptic(benchmark::State& state) {
    Setup s(static_cast<std::size_t>(state.range(0)));
    int iters = 0;
    for (auto _ : state) {
        auto sol = magma::solve_elliptic(magma::EllipticProblem(s.a, s.g, 1e-10));
        iters = sol.iterations;
        benchmark::DoNotOptimize(sol.u);
    }
    state.counters["cg_iters"] = iters;
}
BENCHMARK(bm_solve_elliptic)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
