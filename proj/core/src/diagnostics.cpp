#include "magma/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace magma {

double energy_potential(double phi, double p) {
    const double lp = std::log(phi);
    if (std::abs(p - 2.0) <= 1e-9) return (phi - 1.0) - lp;
    if (std::abs(p - 1.0) <= 1e-9) return phi * lp - phi + 1.0;
    const double e = p - 2.0;
    // (phi^-e - 1 + e (phi - 1)) / e, kept accurate as e -> 0.
    const double num = std::expm1(-e * lp) / e + (phi - 1.0);
    return num / (p - 1.0);
}

double conserved_energy(const Field& phi, const ConservedEnergyParams& params) {
    const auto st = field_stats(phi);
    if (st.min <= 0.0) throw PositivityLost(st.min);
    if (!(params.m >= 0.0 && params.m <= 1.0)) throw InvalidArgument("conserved_energy: m must lie in [0, 1]");
    const double p = params.n + params.m;
    const auto& grid = phi.grid();

    std::vector<double> density(phi.size(), 0.0);
    for (int j = 0; j < grid.dim(); ++j) {
        const auto g = spectral_derivative(phi, j);
        for (std::size_t i = 0; i < density.size(); ++i) density[i] += g[i] * g[i];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double w = std::pow(phi[i], -2.0 * params.m);
        total += 0.5 * w * density[i] + energy_potential(phi[i], p);
    }
    return total * grid.cell_volume();
}

double dispersion_omega(double n, double phi0, std::span<const double> k) {
    if (k.empty()) throw InvalidArgument("dispersion_omega: empty wavevector");
    double k2 = 0.0;
    for (double v : k) k2 += v * v;
    return n * std::pow(phi0, n - 1.0) * k.back() / (1.0 + std::pow(phi0, n) * k2);
}

DispersionFit fit_dispersion(const TorusGrid& grid, double n, std::span<const int> mode,
                             const DispersionOptions& opts) {
    if (mode.size() != static_cast<std::size_t>(grid.dim())) throw InvalidArgument("fit_dispersion: mode has wrong rank");
    if (!(opts.epsilon > 0.0 && opts.epsilon <= 1e-3)) throw InvalidArgument("fit_dispersion: epsilon must lie in (0, 1e-3]");
    if (std::all_of(mode.begin(), mode.end(), [](int m) { return m == 0; }))
        throw InvalidArgument("fit_dispersion: mode must be nonzero");
    if (!(opts.dt > 0.0 && opts.t_end > opts.dt)) throw InvalidArgument("fit_dispersion: need 0 < dt < t_end");

    DispersionFit fit{};
    for (int j = 0; j < grid.dim(); ++j) fit.k.push_back(grid.wavenumber(j, mode[static_cast<std::size_t>(j)]));
    fit.epsilon = opts.epsilon;
    fit.omega_formula = dispersion_omega(n, 1.0, fit.k);

    auto phase_of = [&](std::span<const double> x) {
        double s = 0.0;
        for (int j = 0; j < grid.dim(); ++j) s += fit.k[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        return s;
    };
    const Field phase = Field::sample(grid, phase_of);
    auto project = [&](const Field& f) {
        std::complex<double> a{0.0, 0.0};
        for (std::size_t i = 0; i < f.size(); ++i) a += (f[i] - 1.0) * std::polar(1.0, -phase[i]);
        return a;
    };

    EvolveConfig cfg;
    cfg.n_exponent = n;
    cfg.elliptic_tol = opts.elliptic_tol;
    Field phi = phase.map([eps = opts.epsilon](double th) { return 1.0 + eps * std::cos(th); });

    const auto steps = static_cast<std::size_t>(std::ceil(opts.t_end / opts.dt - 1e-9));
    const double dt = opts.t_end / static_cast<double>(steps);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double prev = std::arg(project(phi)), unwrapped = prev;
    for (std::size_t i = 0; i <= steps; ++i) {
        if (i > 0) {
            phi = step_rk4(phi, dt, cfg);
            const double a = std::arg(project(phi));
            double jump = a - prev;
            jump -= 2.0 * std::numbers::pi * std::round(jump / (2.0 * std::numbers::pi));
            unwrapped += jump;
            prev = a;
        }
        const double t = dt * static_cast<double>(i);
        sx += t;
        sy += unwrapped;
        sxx += t * t;
        sxy += t * unwrapped;
    }
    const double m = static_cast<double>(steps + 1);
    // The mode phase is k.x - omega t, so the projection rotates as exp(-i omega t).
    fit.omega_measured = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

PeakTrack track_peak(std::span<const Snapshot> snapshots, double speed_bound) {
    if (snapshots.size() < 5) throw InvalidArgument("track_peak: need at least 5 snapshots");
    const auto& grid = snapshots.front().phi.grid();
    const int axis = grid.dim() - 1;
    const double L = grid.length(axis);
    const std::size_t N = grid.n_points(axis);
    const std::size_t stride = grid.stride(axis);

    PeakTrack track{};
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const auto& snap = snapshots[s];
        if (!(snap.phi.grid() == grid)) throw GridMismatch();
        if (s > 0) {
            const double gap = snap.t - snapshots[s - 1].t;
            if (!(gap > 0.0)) throw InvalidArgument("track_peak: snapshot times must increase");
            if (speed_bound > 0.0 && !(speed_bound * gap < 0.25 * L))
                throw InvalidArgument("track_peak: snapshot cadence too coarse for the expected speed");
        }
        const auto st = field_stats(snap.phi);
        if (st.max - st.min <= 1e-12) throw NoPeak("track_peak: field is constant");

        const auto& v = snap.phi.values();
        const auto flat = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        const auto idx = grid.unravel(flat);
        const std::size_t i = idx[static_cast<std::size_t>(axis)];
        const std::size_t base = flat - i * stride;
        const double fm = v[base + ((i + N - 1) % N) * stride];
        const double f0 = v[flat];
        const double fp = v[base + ((i + 1) % N) * stride];
        const double curv = fm - 2.0 * f0 + fp;
        const double offset = curv < 0.0 ? 0.5 * (fm - fp) / curv : 0.0;
        const double x = (static_cast<double>(i) + offset) * grid.spacing(axis);

        if (track.positions.empty()) {
            track.positions.push_back(x);
        } else {
            const double last = track.positions.back();
            double jump = x - std::fmod(last, L);
            jump -= L * std::round(jump / L);
            track.positions.push_back(last + jump);
        }
        track.times.push_back(snap.t);
    }

    const double m = static_cast<double>(track.times.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < track.times.size(); ++i) {
        sx += track.times[i];
        sy += track.positions[i];
        sxx += track.times[i] * track.times[i];
        sxy += track.times[i] * track.positions[i];
    }
    track.speed = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return track;
}

}  // namespace magma
