#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "magma/diagnostics.hpp"
#include "magma/error.hpp"
#include "magma/evolution.hpp"
#include "magma/grid.hpp"

using namespace magma;

namespace {

constexpr double kPi = std::numbers::pi;

Field bump(const TorusGrid& g, double center) {
    const double L = g.length(g.dim() - 1);
    return Field::sample(g, [&](auto x) {
        double dx = std::remainder(x.back() - center, L);
        double v = 1.0 + 0.5 * std::exp(-dx * dx);
        return v;
    });
}

}  // namespace

TEST_CASE("energy vanishes at the background and is nonnegative near it") {
    auto g = TorusGrid::cube(1, 64);
    for (double n : {2.0, 2.5, 3.0}) {
        for (double m : {0.0, 0.5, 1.0}) {
            ConservedEnergyParams p{n, m};
            CHECK(conserved_energy(Field::constant(g, 1.0), p) == doctest::Approx(0.0));
        }
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.7, 1.3);
    for (int t = 0; t < 200; ++t) {
        double p = 1.0 + 2.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        CHECK(energy_potential(u(rng), p) >= 0.0);
    }
    CHECK(energy_potential(1.0, 2.0) == 0.0);
    CHECK(energy_potential(1.0, 1.0) == 0.0);
    // Continuity across the removable exponents.
    CHECK(energy_potential(1.3, 2.0 + 1e-7) == doctest::Approx(energy_potential(1.3, 2.0)).epsilon(1e-6));
    CHECK(energy_potential(1.3, 1.0 + 1e-7) == doctest::Approx(energy_potential(1.3, 1.0)).epsilon(1e-6));
    CHECK_THROWS_AS(conserved_energy(Field::sample(g, [](auto x) { return std::cos(x[0]); }), {}), PositivityLost);
}

TEST_CASE("energy is translation invariant") {
    TorusGrid g({16, 32}, {2.0 * kPi, 10.0});
    auto f = Field::sample(g, [](auto x) { return 1.0 + 0.3 * std::sin(x[0]) * std::exp(std::cos(2.0 * kPi * x[1] / 10.0)) / 3.0; });
    double shift[] = {3.0 * g.spacing(0), 5.0 * g.spacing(1)};
    ConservedEnergyParams p{2.5, 0.3};
    double e0 = conserved_energy(f, p), e1 = conserved_energy(translate(f, shift), p);
    CHECK(std::abs(e1 - e0) <= 1e-12 * std::abs(e0));
}

TEST_CASE("energy is conserved in one dimension") {
    auto g = TorusGrid::cube(1, 64);
    auto phi0 = Field::sample(g, [](auto x) { return 1.2 + 0.3 * std::cos(x[0]) + 0.1 * std::sin(2.0 * x[0]); });
    EvolveConfig cfg;
    cfg.n_exponent = 2.0;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.elliptic_tol = 1e-13;
    auto res = evolve(phi0, cfg);
    ConservedEnergyParams p{2.0, 0.0};
    double e0 = conserved_energy(phi0, p), e1 = conserved_energy(res.final_state, p);
    CHECK(std::abs(e1 - e0) <= 1e-8 * e0);
}

TEST_CASE("dispersion formula") {
    double k1[] = {1.0};
    CHECK(dispersion_omega(2.0, 1.0, k1) == 1.0);
    double k2[] = {1.0, 1.0};
    CHECK(dispersion_omega(3.0, 1.0, k2) == 1.0);
}

TEST_CASE("measured dispersion in one and two dimensions") {
    int m1[] = {1};
    auto f1 = fit_dispersion(TorusGrid::cube(1, 32), 2.0, m1);
    CHECK(f1.omega_formula == doctest::Approx(1.0));
    CHECK(std::abs(f1.omega_measured - 1.0) <= 1e-3);

    int m2[] = {1, 1};
    auto f2 = fit_dispersion(TorusGrid::cube(2, 16), 3.0, m2);
    CHECK(std::abs(f2.omega_measured - 1.0) <= 1e-3);

    int zero[] = {0};
    CHECK_THROWS_AS(fit_dispersion(TorusGrid::cube(1, 16), 2.0, zero), InvalidArgument);
    DispersionOptions big;
    big.epsilon = 1e-2;
    CHECK_THROWS_AS(fit_dispersion(TorusGrid::cube(1, 16), 2.0, m1, big), InvalidArgument);
}

TEST_CASE("nonlinear frequency correction is quadratic in the amplitude") {
    int m[] = {1};
    auto g = TorusGrid::cube(1, 32);
    DispersionOptions a, b;
    a.epsilon = 5e-4;
    b.epsilon = 1e-3;
    a.dt = b.dt = 0.005;
    a.t_end = b.t_end = 10.0;
    auto fa = fit_dispersion(g, 2.0, m, a), fb = fit_dispersion(g, 2.0, m, b);
    double order = std::log2(std::abs(fb.omega_measured - fb.omega_formula) /
                             std::abs(fa.omega_measured - fa.omega_formula));
    INFO("errors " << fa.omega_measured - fa.omega_formula << " " << fb.omega_measured - fb.omega_formula);
    CHECK(order > 1.5);
    CHECK(order < 2.5);
}

TEST_CASE("peak tracking of a rigid translation") {
    for (int d = 1; d <= 2; ++d) {
        std::vector<std::size_t> n(static_cast<std::size_t>(d), 8);
        n.back() = 128;
        std::vector<double> L(static_cast<std::size_t>(d), 2.0 * kPi);
        L.back() = 20.0;
        TorusGrid g(n, L);
        std::vector<Snapshot> snaps;
        for (int i = 0; i < 12; ++i) {
            double t = 0.5 * i;
            // Wraps across the boundary once.
            snaps.push_back({t, static_cast<std::size_t>(i), bump(g, 12.0 + 1.5 * t), 0.0});
        }
        auto track = track_peak(snaps, 1.5);
        CHECK(track.speed == doctest::Approx(1.5).epsilon(1e-3 / 1.5));
        CHECK(track.positions.size() == 12);
    }
}

TEST_CASE("peak tracking failures") {
    auto g = TorusGrid::cube(1, 32);
    std::vector<Snapshot> flat;
    for (int i = 0; i < 5; ++i) flat.push_back({0.1 * i, static_cast<std::size_t>(i), Field::constant(g, 1.0), 0.0});
    CHECK_THROWS_AS(track_peak(flat), NoPeak);
    std::vector<Snapshot> few(flat.begin(), flat.begin() + 3);
    CHECK_THROWS_AS(track_peak(few), InvalidArgument);
    std::vector<Snapshot> coarse;
    for (int i = 0; i < 5; ++i) coarse.push_back({10.0 * i, static_cast<std::size_t>(i), bump(g, 1.0), 0.0});
    CHECK_THROWS_AS(track_peak(coarse, 1.0), InvalidArgument);
}
