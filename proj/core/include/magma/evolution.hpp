#ifndef MAGMA_EVOLUTION_HPP
#define MAGMA_EVOLUTION_HPP

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "magma/grid.hpp"

namespace magma {

struct EvolveConfig {
    /// Permeability exponent n in phi_t + d_{x_d}(phi^n) - div(phi^n grad phi_t) = 0.
    double n_exponent = 2.0;
    double dt = 0.01;
    double t_end = 1.0;
    /// Sobolev index of the blow-up monitor; unset selects default_monitor_index(d).
    std::optional<double> s_monitor;
    double blowup_threshold = 1e6;
    double elliptic_tol = 1e-10;
    /// Steps between stored snapshots; 0 stores none.
    std::size_t snapshot_every = 0;
};

/// Smallest integer strictly above d/2 + floor(d/2) + 2.
double default_monitor_index(int d);

/// ||phi - 1||_{H^s} + ||1/phi||_inf.
double blowup_monitor(const Field& phi, double s);

/// Total mass of phi - 1 (grid-sum quadrature).
double measure_mass(const Field& phi);

/// The compaction rate C = phi_t: solves (I - div(phi^n grad)) C = -d_{x_d}(phi^n).
/// Throws PositivityLost when min(phi) <= 0 and propagates NotConverged.
Field rhs(const Field& phi, const EvolveConfig& cfg);

/// One classical Runge-Kutta step; all four stages use cfg.elliptic_tol.
Field step_rk4(const Field& phi, double dt, const EvolveConfig& cfg);

struct CompletedToTEnd {};
struct ThresholdExceeded {
    double t;
};
struct EllipticFailure {
    double t;
};
struct PositivityLostAt {
    double t;
};
using Verdict = std::variant<CompletedToTEnd, ThresholdExceeded, EllipticFailure, PositivityLostAt>;

const char* verdict_name(const Verdict& v);

struct BlowupReport {
    Verdict verdict;
    double final_monitor = 0.0;
    /// Monitor value after every accepted step, starting with t = 0.
    std::vector<double> times;
    std::vector<double> monitor;
};

struct Snapshot {
    double t;
    std::size_t step;
    Field phi;
    double monitor;
};

struct LogRow {
    double t;
    double mass;
    double monitor;
    double min_phi;
    int cg_iters;
};

struct EvolveResult {
    std::vector<Snapshot> snapshots;
    std::vector<LogRow> log;
    BlowupReport report;
    Field final_state;
    double final_time;
};

/// Integrates to t_end with fixed steps (the last one shortened to land on
/// t_end) or until a verdict other than CompletedToTEnd. Failures are reported
/// as verdicts; only invalid configuration throws.
EvolveResult evolve(const Field& phi0, const EvolveConfig& cfg);

}  // namespace magma

#endif  // MAGMA_EVOLUTION_HPP
