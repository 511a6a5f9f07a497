// Boost 1.74 pchip calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <string>

#include "magma/profile.hpp"

namespace magma::profile {
namespace {

/// q0 Q(r) for dimensionless r, without the final blend.
class RadialProfile {
public:
    explicit RadialProfile(const ProfileSolution& sol)
        : q0_(1.0 / sol.Q_tau),
          r_end_(sol.samples.r.back()),
          tail_(linear_tail(sol)),
          spline_(std::vector<double>(sol.samples.r), std::vector<double>(sol.samples.Q)) {}

    double operator()(double r) const {
        if (r <= r_end_) return q0_ * spline_(r);
        return q0_ * (tail_.Q_tau + tail_.deviation(r));
    }

private:
    double q0_;
    double r_end_;
    LinearTail tail_;
    boost::math::interpolators::pchip<std::vector<double>> spline_;
};

}  // namespace

PhysicalProfile rescale(const ProfileSolution& sol, double q0_bar) {
    const auto& p = sol.params;
    const auto sc = scale_wave(p.n, p.c, p.mu, q0_bar);
    PhysicalProfile out{{}, {}, sc.c_bar, q0_bar};
    out.r_bar.reserve(sol.samples.size());
    out.Q_bar.reserve(sol.samples.size());
    for (std::size_t i = 0; i < sol.samples.size(); ++i) {
        out.r_bar.push_back(sc.r_scale * sol.samples.r[i]);
        out.Q_bar.push_back(q0_bar * sol.samples.Q[i]);
    }
    return out;
}

double physical_speed(const ProfileSolution& sol) {
    return std::pow(sol.Q_tau, 1.0 - sol.params.n) * sol.params.c;
}

double physical_half_width(const ProfileSolution& sol) {
    const auto& s = sol.samples;
    const double half = 0.5 * (1.0 + sol.Q_tau);  // Q halfway between peak and limit
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s.Q[i] <= half) {
            const double t = (s.Q[i - 1] - half) / (s.Q[i - 1] - s.Q[i]);
            const double r = s.r[i - 1] + t * (s.r[i] - s.r[i - 1]);
            return std::pow(1.0 / sol.Q_tau, 0.5 * sol.params.n) * r;
        }
    }
    throw NumericalError("physical_half_width: profile never drops to half amplitude");
}

Field embed_on_torus(const ProfileSolution& sol, const TorusGrid& grid, std::span<const double> center) {
    if (center.size() != static_cast<std::size_t>(grid.dim())) throw InvalidArgument("embed: center has wrong rank");
    if (sol.params.d != static_cast<double>(grid.dim()))
        throw InvalidArgument("embed: profile dimension does not match the grid");
    if (sol.samples.size() < 4) throw InvalidArgument("embed: profile has too few samples");
    if (!(sol.Q_tau > 0.0 && sol.Q_tau < 1.0)) throw InvalidArgument("embed: Q_tau must lie in (0, 1)");

    const RadialProfile radial(sol);
    const double r_scale = std::pow(1.0 / sol.Q_tau, 0.5 * sol.params.n);

    double half_period = grid.length(0);
    for (int j = 0; j < grid.dim(); ++j) half_period = std::min(half_period, 0.5 * grid.length(j));
    const double discrepancy = std::abs(radial(half_period / r_scale) - 1.0);
    if (!(discrepancy < 1e-8))
        throw DomainTooSmall("embed: profile differs from 1 by " + std::to_string(discrepancy) +
                                 " at half the shortest period",
                             discrepancy);

    const double blend_start = 0.95 * half_period;
    auto value = [&](double rho) {
        if (rho >= half_period) return 1.0;
        const double v = radial(rho / r_scale);
        if (rho <= blend_start) return v;
        const double t = (rho - blend_start) / (half_period - blend_start);
        const double w = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // C2 smoothstep
        return (1.0 - w) * v + w;
    };

    return Field::sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (int j = 0; j < grid.dim(); ++j) {
            const double L = grid.length(j);
            double dx = x[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)];
            dx -= L * std::round(dx / L);
            r2 += dx * dx;
        }
        return value(std::sqrt(r2));
    });
}

}  // namespace magma::profile
