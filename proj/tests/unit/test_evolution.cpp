#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <variant>

#include "magma/error.hpp"
#include "magma/evolution.hpp"
#include "magma/grid.hpp"

using namespace magma;

namespace {

Field wavy(const TorusGrid& g) {
    return Field::sample(g, [](auto x) {
        double v = 1.0 + 0.2 * std::cos(x.back()) + 0.1 * std::sin(2.0 * x.back() + 0.4);
        if (x.size() > 1) v += 0.1 * std::sin(x[0]);
        return v;
    });
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("default monitor index") {
    CHECK(default_monitor_index(1) == 3.0);
    CHECK(default_monitor_index(2) == 5.0);
    CHECK(default_monitor_index(3) == 5.0);
}

TEST_CASE("constant states are fixed points") {
    for (int d = 1; d <= 3; ++d) {
        auto g = TorusGrid::cube(d, 8);
        for (double c : {0.5, 1.0, 2.3}) {
            auto r = rhs(Field::constant(g, c), EvolveConfig{});
            for (double v : r.values()) CHECK(std::abs(v) <= 1e-12);
        }
    }
}

TEST_CASE("rhs rejects non-positive porosity") {
    auto g = TorusGrid::cube(1, 16);
    auto phi = Field::sample(g, [](auto x) { return 0.5 + std::cos(x[0]); });
    CHECK_THROWS_AS(rhs(phi, EvolveConfig{}), PositivityLost);
}

TEST_CASE("mass is measured relative to the background") {
    auto g = TorusGrid::cube(1, 32);
    CHECK(measure_mass(Field::constant(g, 1.0)) == 0.0);
    CHECK(std::abs(measure_mass(Field::sample(g, [](auto x) { return 1.0 + std::cos(x[0]); }))) < 1e-14);
    CHECK(measure_mass(Field::constant(g, 1.5)) == doctest::Approx(0.5 * g.volume()));
}

TEST_CASE("mass is conserved along trajectories") {
    for (int d = 1; d <= 2; ++d) {
        auto g = TorusGrid::cube(d, 32);
        auto phi0 = wavy(g) + Field::constant(g, 0.05);
        EvolveConfig cfg;
        cfg.t_end = 1.0;
        cfg.dt = 0.02;
        cfg.elliptic_tol = 1e-12;
        auto res = evolve(phi0, cfg);
        REQUIRE(std::holds_alternative<CompletedToTEnd>(res.report.verdict));
        double m0 = res.log.front().mass;
        double drift = 0.0;
        for (const auto& row : res.log) drift = std::max(drift, std::abs(row.mass - m0));
        CHECK(drift <= 1e-10 * std::abs(m0));
        CHECK(res.final_time == doctest::Approx(1.0));
    }
}

TEST_CASE("RK4 converges at fourth order") {
    auto g = TorusGrid::cube(1, 32);
    auto phi0 = wavy(g);
    EvolveConfig cfg;
    cfg.elliptic_tol = 1e-14;
    auto run = [&](double dt) {
        Field phi = phi0;
        int steps = static_cast<int>(std::lround(0.8 / dt));
        for (int i = 0; i < steps; ++i) phi = step_rk4(phi, dt, cfg);
        return phi;
    };
    auto a = run(0.1), b = run(0.05), c = run(0.025);
    double order = std::log2(l2_norm(a - b) / l2_norm(b - c));
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}

TEST_CASE("monitor is composed from the Sobolev norm and the inverse sup") {
    auto g = TorusGrid::cube(2, 16);
    auto phi = wavy(g);
    double s = default_monitor_index(2);
    CHECK(blowup_monitor(phi, s) == hs_norm(phi - Field::constant(g, 1.0), s) + field_stats(phi).inv_sup);
    CHECK(blowup_monitor(Field::constant(g, 1.0), s) == 1.0);
}

TEST_CASE("uniform background completes") {
    auto g = TorusGrid::cube(2, 16);
    EvolveConfig cfg;
    cfg.t_end = 0.5;
    cfg.dt = 0.1;
    cfg.snapshot_every = 2;
    auto res = evolve(Field::constant(g, 1.0), cfg);
    CHECK(std::holds_alternative<CompletedToTEnd>(res.report.verdict));
    CHECK(std::string(verdict_name(res.report.verdict)) == "CompletedToTEnd");
    CHECK(res.report.monitor.size() == 6);
    CHECK(res.log.size() == 6);
    CHECK(max_abs_diff(res.final_state, Field::constant(g, 1.0)) < 1e-14);
    REQUIRE(!res.snapshots.empty());
    CHECK(res.snapshots.front().step == 0);
    for (std::size_t i = 1; i < res.snapshots.size(); ++i) CHECK(res.snapshots[i].step % 2 == 0);
}

TEST_CASE("low threshold trips the monitor") {
    auto g = TorusGrid::cube(1, 32);
    EvolveConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 0.05;
    cfg.blowup_threshold = 1.0;
    auto res = evolve(wavy(g), cfg);
    REQUIRE(std::holds_alternative<ThresholdExceeded>(res.report.verdict));
    CHECK(res.report.final_monitor > cfg.blowup_threshold);
    CHECK(res.report.monitor.back() > cfg.blowup_threshold);
    CHECK(res.report.times.size() == res.report.monitor.size());
}

TEST_CASE("near-vacuum data ends with a valid verdict") {
    auto g = TorusGrid::cube(1, 32);
    auto phi0 = Field::sample(g, [](auto x) { return 1.0 + (1.0 - 1e-4) * std::cos(x[0]); });
    EvolveConfig cfg;
    cfg.t_end = 0.5;
    cfg.dt = 0.05;
    cfg.blowup_threshold = 1e3;
    auto res = evolve(phi0, cfg);
    CHECK(res.report.times.size() == res.report.monitor.size());
    for (std::size_t i = 1; i < res.report.times.size(); ++i) CHECK(res.report.times[i] > res.report.times[i - 1]);
    CHECK(!std::holds_alternative<CompletedToTEnd>(res.report.verdict));
}

TEST_CASE("invalid configuration throws") {
    auto g = TorusGrid::cube(1, 16);
    EvolveConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(evolve(Field::constant(g, 1.0), cfg), InvalidArgument);
}
