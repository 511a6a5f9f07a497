#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "magma/error.hpp"
#include "magma/grid.hpp"
#include "magma/snapshot.hpp"

using namespace magma;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Field random_field(const TorusGrid& grid, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(grid.size());
    for (auto& x : v) x = dist(rng);
    return Field(grid, std::move(v));
}

}  // namespace

TEST_CASE("grid construction validates point counts") {
    CHECK_THROWS_AS(TorusGrid({7}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(TorusGrid({6}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(TorusGrid({8, 8}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(TorusGrid({8}, {-1.0}), InvalidArgument);
    auto g = TorusGrid::cube(2, 16);
    CHECK(g.dim() == 2);
    CHECK(g.size() == 256);
    CHECK(g.mode_number(0, 0) == 0);
    CHECK(g.mode_number(0, 8) == -8);
    CHECK(g.mode_number(0, 15) == -1);
    CHECK(g.wavenumber(0, 3) == doctest::Approx(3.0));
}

TEST_CASE("field rejects non-finite values") {
    auto g = TorusGrid::cube(1, 8);
    std::vector<double> v(8, 1.0);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Field(g, v), NonFiniteValue);
    v[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Field(g, v), NonFiniteValue);
}

TEST_CASE("forward transform of constant and single mode") {
    auto g = TorusGrid::cube(1, 16);
    auto s = forward_transform(Field::constant(g, 1.0));
    for (int m = -8; m < 8; ++m) {
        int mm[] = {m};
        CHECK(std::abs(s.coeff(mm) - std::complex<double>(m == 0 ? 1.0 : 0.0)) < 1e-15);
    }
    auto c = forward_transform(Field::sample(g, [](auto x) { return std::cos(x[0]); }));
    for (int m = -8; m < 8; ++m) {
        int mm[] = {m};
        double expect = (m == 1 || m == -1) ? 0.5 : 0.0;
        CHECK(std::abs(c.coeff(mm) - expect) < 1e-15);
    }
    auto back = inverse_transform(c);
    CHECK(max_abs_diff(back, Field::sample(g, [](auto x) { return std::cos(x[0]); })) < 1e-15);
}

TEST_CASE("round trip reproduces random fields") {
    for (int d = 1; d <= 3; ++d) {
        std::vector<std::size_t> n(static_cast<std::size_t>(d), 16);
        n.back() = 32;
        std::vector<double> L(static_cast<std::size_t>(d), 2.0 * kPi);
        L[0] = 5.0;
        TorusGrid g(n, L);
        auto f = random_field(g, 17u + static_cast<unsigned>(d));
        auto s = forward_transform(f);
        CHECK(s.symmetry_defect() < 1e-14);
        auto back = inverse_transform(s);
        double scale = *std::max_element(f.values().begin(), f.values().end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
        CHECK(max_abs_diff(back, f) <= 1e-12 * std::abs(scale));
    }
}

TEST_CASE("inverse transform rejects asymmetric spectra") {
    auto g = TorusGrid::cube(1, 8);
    std::vector<std::complex<double>> c(8, 0.0);
    c[1] = {1.0, 0.0};
    CHECK_THROWS_AS(inverse_transform(Spectrum(g, c)), InvalidArgument);
    c[7] = {1.0, 0.0};
    CHECK_NOTHROW(inverse_transform(Spectrum(g, c)));
}

TEST_CASE("spectral derivative of analytic functions") {
    auto g = TorusGrid::cube(1, 32);
    auto sin_f = Field::sample(g, [](auto x) { return std::sin(x[0]); });
    auto cos_f = Field::sample(g, [](auto x) { return std::cos(x[0]); });
    CHECK(max_abs_diff(spectral_derivative(sin_f, 0), cos_f) < 1e-13);

    auto e = Field::sample(g, [](auto x) { return std::exp(std::sin(x[0])); });
    auto de = Field::sample(g, [](auto x) { return std::cos(x[0]) * std::exp(std::sin(x[0])); });
    CHECK(max_abs_diff(spectral_derivative(e, 0), de) < 1e-9);

    // Mixed axes and non-2pi period.
    TorusGrid g2({16, 32}, {4.0, 2.0 * kPi});
    auto f = Field::sample(g2, [](auto x) { return std::sin(kPi * x[0] / 2.0) * std::cos(2.0 * x[1]); });
    auto fx = Field::sample(g2, [](auto x) { return kPi / 2.0 * std::cos(kPi * x[0] / 2.0) * std::cos(2.0 * x[1]); });
    auto fy = Field::sample(g2, [](auto x) { return -2.0 * std::sin(kPi * x[0] / 2.0) * std::sin(2.0 * x[1]); });
    CHECK(max_abs_diff(spectral_derivative(f, 0), fx) < 1e-12);
    CHECK(max_abs_diff(spectral_derivative(f, 1), fy) < 1e-12);
    CHECK_THROWS_AS(spectral_derivative(f, 2), InvalidArgument);
}

TEST_CASE("Sobolev norms of simple fields") {
    auto g = TorusGrid::cube(1, 32);
    auto s = Field::sample(g, [](auto x) { return std::sin(x[0]); });
    CHECK(hs_norm(s, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(hs_norm(s, 1.0) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-13));
    CHECK(hs_norm(Field::constant(g, 0.0), 3.0) == 0.0);
    CHECK(hs_norm(s, 0.0) == doctest::Approx(l2_norm(s)).epsilon(1e-13));

    // Parseval on random data.
    TorusGrid g2({16, 8}, {3.0, 7.0});
    auto f = random_field(g2, 5);
    CHECK(hs_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("field statistics") {
    auto g = TorusGrid::cube(1, 16);
    auto f = Field::sample(g, [](auto x) { return 2.0 + std::cos(x[0]); });
    auto st = field_stats(f);
    CHECK(st.min == doctest::Approx(1.0));
    CHECK(st.max == doctest::Approx(3.0));
    CHECK(st.inv_sup == doctest::Approx(1.0));
    auto z = field_stats(Field::sample(g, [](auto x) { return std::cos(x[0]); }));
    CHECK(std::isinf(z.inv_sup));
    CHECK(mean(f) == doctest::Approx(2.0));
}

TEST_CASE("translation by whole and fractional cells") {
    auto g = TorusGrid::cube(1, 32);
    auto f = Field::sample(g, [](auto x) { return std::exp(std::cos(x[0])); });
    double shift[] = {0.3};
    auto shifted = translate(f, shift);
    auto expect = Field::sample(g, [](auto x) { return std::exp(std::cos(x[0] - 0.3)); });
    CHECK(max_abs_diff(shifted, expect) < 1e-10);
    double back[] = {-0.3};
    CHECK(max_abs_diff(translate(shifted, back), f) < 1e-13);
}

TEST_CASE("field arithmetic checks grids") {
    auto a = Field::constant(TorusGrid::cube(1, 8), 1.0);
    auto b = Field::constant(TorusGrid::cube(1, 16), 1.0);
    CHECK_THROWS_AS(a + b, GridMismatch);
    auto c = 2.0 * a - a * a;
    CHECK(c[0] == 1.0);
}

TEST_CASE("snapshot round trip is bit exact") {
    TorusGrid g({8, 16}, {1.5, 2.0 * kPi});
    auto f = random_field(g, 9);
    std::stringstream ss;
    write_snapshot(ss, f);
    auto back = read_snapshot(ss);
    CHECK(back.grid() == g);
    CHECK(std::equal(back.values().begin(), back.values().end(), f.values().begin()));

    std::stringstream bad("not a snapshot at all, definitely not");
    CHECK_THROWS_AS(read_snapshot(bad), IoError);
}
