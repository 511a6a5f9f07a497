#ifndef MAGMA_DIAGNOSTICS_HPP
#define MAGMA_DIAGNOSTICS_HPP

#include <span>
#include <vector>

#include "magma/error.hpp"
#include "magma/evolution.hpp"
#include "magma/grid.hpp"

namespace magma {

/// Exponents of phi_t + d_x(phi^n) - d_x(phi^n d_x(phi^-m phi_t)) = 0.
struct ConservedEnergyParams {
    double n = 2.0;
    double m = 0.0;
};

/// Integral of |phi^-m grad phi|^2 / 2 + G(phi), with
/// G = (phi^(2-p) - 1 + (p-2)(phi-1)) / ((p-1)(p-2)), p = n + m.
/// At p = 2 and p = 1 G takes its continuous limits phi - 1 - ln phi and
/// phi ln phi - phi + 1. Throws PositivityLost if min(phi) <= 0.
double conserved_energy(const Field& phi, const ConservedEnergyParams& params);

/// Potential density G(phi) above.
double energy_potential(double phi, double p);

/// Linear dispersion about phi0: n phi0^(n-1) k_d / (1 + phi0^n |k|^2).
double dispersion_omega(double n, double phi0, std::span<const double> k);

struct DispersionFit {
    std::vector<double> k;  ///< physical wavevector
    double epsilon;
    double omega_formula;
    double omega_measured;
};

struct DispersionOptions {
    double epsilon = 1e-4;
    double t_end = 20.0;
    double dt = 0.01;
    double elliptic_tol = 1e-12;
};

/// Evolves 1 + eps cos(k.x) for integer mode numbers `mode`, projects the
/// trajectory on exp(i k.x) and fits the unwrapped phase slope.
/// Throws InvalidArgument unless 0 < eps <= 1e-3 and the mode is nonzero.
DispersionFit fit_dispersion(const TorusGrid& grid, double n, std::span<const int> mode,
                             const DispersionOptions& opts = {});

class NoPeak : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct PeakTrack {
    std::vector<double> times;
    std::vector<double> positions;  ///< unwrapped, along the last axis
    double speed;
};

/// Least-squares speed of the maximum along the last axis, located per
/// snapshot by a parabola through the peak and its two neighbours and
/// unwrapped across the period. With speed_bound > 0 the snapshot cadence
/// must satisfy speed_bound * dt < L/4. Needs at least 5 snapshots.
PeakTrack track_peak(std::span<const Snapshot> snapshots, double speed_bound = 0.0);

}  // namespace magma

#endif  // MAGMA_DIAGNOSTICS_HPP
