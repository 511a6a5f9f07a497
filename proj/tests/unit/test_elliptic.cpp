#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "magma/elliptic.hpp"
#include "magma/error.hpp"
#include "magma/grid.hpp"

using namespace magma;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Random trigonometric polynomial with modes |m_j| <= 3.
Field smooth_random(const TorusGrid& grid, std::mt19937_64& rng, double amplitude) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    std::vector<std::vector<double>> k;
    std::vector<double> amp, ph;
    for (int t = 0; t < 6; ++t) {
        std::vector<double> kk;
        for (int j = 0; j < grid.dim(); ++j)
            kk.push_back(grid.wavenumber(j, static_cast<int>(rng() % 7) - 3));
        k.push_back(kk);
        amp.push_back(nd(rng));
        ph.push_back(phase(rng));
    }
    auto f = Field::sample(grid, [&](auto x) {
        double v = 0.0;
        for (std::size_t t = 0; t < k.size(); ++t) {
            double arg = ph[t];
            for (std::size_t j = 0; j < x.size(); ++j) arg += k[t][j] * x[j];
            v += amp[t] * std::cos(arg);
        }
        return v;
    });
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return (amplitude / m) * f;
}

}  // namespace

TEST_CASE("apply with unit coefficient") {
    auto g = TorusGrid::cube(1, 32);
    auto a = Field::constant(g, 1.0);
    auto u = Field::sample(g, [](auto x) { return std::sin(x[0]); });
    CHECK(max_abs_diff(apply_elliptic(a, u), 2.0 * u) < 1e-13);

    auto var = Field::sample(g, [](auto x) { return 2.0 + std::cos(x[0]); });
    auto c = Field::constant(g, 3.25);
    CHECK(max_abs_diff(apply_elliptic(var, c), c) < 1e-13);
}

TEST_CASE("apply with variable coefficient matches symbolic derivative") {
    // d/dx[(2 + cos x) cos x] = -sin x (2 + cos x) - cos x sin x
    auto g = TorusGrid::cube(1, 64);
    auto a = Field::sample(g, [](auto x) { return 2.0 + std::cos(x[0]); });
    auto u = Field::sample(g, [](auto x) { return std::sin(x[0]); });
    auto expect = Field::sample(g, [](auto x) {
        double s = std::sin(x[0]), c = std::cos(x[0]);
        return s + s * (2.0 + c) + c * s;
    });
    CHECK(max_abs_diff(apply_elliptic(a, u), expect) < 1e-12);
    CHECK_THROWS_AS(apply_elliptic(a, Field::constant(TorusGrid::cube(1, 32), 1.0)), GridMismatch);
}

TEST_CASE("solve with unit coefficient is Fourier division") {
    auto g = TorusGrid::cube(1, 32);
    auto u = Field::sample(g, [](auto x) { return std::sin(x[0]); });
    auto sol = solve_elliptic(EllipticProblem(Field::constant(g, 1.0), 2.0 * u));
    CHECK(max_abs_diff(sol.u, u) < 1e-12);
    CHECK(sol.residual <= 1e-10);

    auto zero = solve_elliptic(EllipticProblem(Field::constant(g, 1.0), Field::constant(g, 0.0)));
    CHECK(max_abs_diff(zero.u, Field::constant(g, 0.0)) == 0.0);
}

TEST_CASE("manufactured solution in two dimensions") {
    auto g = TorusGrid::cube(2, 64);
    auto a = Field::sample(g, [](auto x) { return 2.0 + 0.5 * std::sin(x[0] + x[1]); });
    auto ustar = Field::sample(g, [](auto x) { return std::sin(x[0]) * std::cos(x[1]); });
    auto rhs = apply_elliptic(a, ustar);
    auto sol = solve_elliptic(EllipticProblem(a, rhs, 1e-12));
    CHECK(l2_norm(sol.u - ustar) / l2_norm(ustar) <= 1e-10);
    CHECK(l2_norm(apply_elliptic(a, sol.u) - rhs) <= 1e-12 * l2_norm(rhs));
    CHECK(sol.residual <= 1e-12);
}

TEST_CASE("construction rejects non-positive coefficients") {
    auto g = TorusGrid::cube(1, 16);
    auto a = Field::sample(g, [](auto x) { return std::cos(x[0]); });
    CHECK_THROWS_AS(EllipticProblem(a, Field::constant(g, 1.0)), NonPositiveCoefficient);
    CHECK_THROWS_AS(EllipticProblem(Field::constant(g, 1.0), Field::constant(TorusGrid::cube(1, 8), 1.0)),
                    GridMismatch);
}

TEST_CASE("iteration cap raises NotConverged") {
    auto g = TorusGrid::cube(2, 32);
    auto a = Field::sample(g, [](auto x) { return 1.0 + 0.99 * std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]); });
    auto rhs = Field::sample(g, [](auto x) { return std::sin(x[0] + 2.0 * x[1]); });
    CHECK_THROWS_AS(solve_elliptic(EllipticProblem(a, rhs, 1e-14, 2)), NotConverged);
}

TEST_CASE("self-adjointness, coercivity and inversion on random inputs") {
    std::mt19937_64 rng(2024);
    auto g = TorusGrid::cube(2, 32);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto a = Field::constant(g, 1.5) + smooth_random(g, rng, 1.0);
        auto u = smooth_random(g, rng, 1.0);
        auto v = smooth_random(g, rng, 1.0);
        double luv = inner_product(apply_elliptic(a, u), v);
        double ulv = inner_product(u, apply_elliptic(a, v));
        if (std::abs(luv - ulv) > 1e-10 * std::max(std::abs(luv), 1.0)) ++failures;
        if (inner_product(apply_elliptic(a, u), u) < inner_product(u, u) - 1e-10) ++failures;
        if (trial % 10 == 0) {
            auto sol = solve_elliptic(EllipticProblem(a, apply_elliptic(a, u), 1e-11));
            if (l2_norm(sol.u - u) > 1e-9 * l2_norm(u)) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("warm start reduces iterations") {
    auto g = TorusGrid::cube(2, 32);
    auto a = Field::sample(g, [](auto x) { return 2.0 + std::sin(x[0]) * std::cos(x[1]); });
    auto rhs = Field::sample(g, [](auto x) { return std::cos(x[0] - x[1]); });
    auto cold = solve_elliptic(EllipticProblem(a, rhs, 1e-11));
    EllipticProblem warm(a, rhs, 1e-11);
    warm.initial_guess = cold.u;
    CHECK(solve_elliptic(warm).iterations < cold.iterations);
}

TEST_CASE("Lipschitz gap is linear in the coefficient perturbation") {
    auto g = TorusGrid::cube(1, 64);
    auto a = Field::sample(g, [](auto x) { return 2.0 + std::cos(x[0]); });
    auto rhs = Field::sample(g, [](auto x) { return std::sin(x[0]) + 0.3 * std::cos(2.0 * x[0]); });
    CHECK(lipschitz_gap(a, a, rhs, 1e-13) < 1e-12);
    CHECK(lipschitz_gap(a, 2.0 * a, Field::constant(g, 0.0)) == 0.0);

    std::vector<double> eps{1e-2, 1e-3, 1e-4}, gaps;
    // A non-constant perturbation: constants shift the operator too, but a
    // spatially varying one exercises the full coefficient dependence.
    auto bump = Field::sample(g, [](auto x) { return 1.0 + 0.5 * std::sin(x[0]); });
    for (double e : eps) gaps.push_back(lipschitz_gap(a, a + e * bump, rhs, 1e-12));
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        double slope = std::log(gaps[i] / gaps[i + 1]) / std::log(eps[i] / eps[i + 1]);
        CHECK(slope > 0.8);
        CHECK(slope < 1.2);
    }
}
