#ifndef MAGMA_PROFILE_HPP
#define MAGMA_PROFILE_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "magma/error.hpp"
#include "magma/grid.hpp"

// Radially symmetric solitary waves of the magma equation in rescaled
// variables: Q(0) = 1, Q_r(0) = 0, Q_rr(0) = mu < 0 and
//   -Q_r + (Q^n)_r / c + (Q^n Q_rr)_r + (d-1) Q^n (Q_r / r)_r = 0.
// A wave of speed c_bar = q0^(n-1) c is recovered by Q_bar = q0 Q(r_bar / q0^(n/2)).
namespace magma::profile {

struct ProfileParams {
    double d = 3.0;
    double n = 2.5;
    double c = 1.7;
    /// Shot parameter Q_rr(0); ignored where only (d, n, c) matter.
    double mu = 0.0;
};

/// d > 0, n in [2, 3], c in [1.55, n). Throws InvalidArgument.
void validate(const ProfileParams& p);

class OrderingViolated : public NumericalError {
public:
    using NumericalError::NumericalError;
};
class Indeterminate : public NumericalError {
public:
    using NumericalError::NumericalError;
};
class BracketInvalid : public NumericalError {
public:
    using NumericalError::NumericalError;
};
class TailTooShort : public NumericalError {
public:
    using NumericalError::NumericalError;
};
class DomainTooSmall : public NumericalError {
public:
    DomainTooSmall(const std::string& what, double discrepancy) : NumericalError(what), discrepancy(discrepancy) {}
    double discrepancy;
};

// ---- structure functions F_i(Q, mu) = g_i(Q) + h_i(Q) mu ------------------

double g_fn(int i, double Q, const ProfileParams& p);
double h_fn(int i, double Q, const ProfileParams& p);

/// F1 = -(Q^(1-n) - 1)/(n-1) - (n/c) ln Q + mu d.
double F1(double Q, const ProfileParams& p);
/// F2 = int_1^Q F1(q) q^n dq, closed form.
double F2(double Q, const ProfileParams& p);
/// F3 = F1 - n int_1^Q F2(q) q^-(n+2) dq, closed form.
double F3(double Q, const ProfileParams& p);
/// dF1/dQ = Q^-n - n/(c Q).
double dF1_dQ(double Q, const ProfileParams& p);

/// The mu at which F_i(Q, mu) vanishes: -g_i(Q)/h_i(Q).
double mu_curve(int i, double Q, const ProfileParams& p);

/// Unique zero of h_3 in (0, 1); depends on n only.
double q_star(double n);

struct StructureReport {
    double Q_star;
    double Q1, Q2, Q3;
    double mu1_min, mu2_min, mu3_min;
};

/// Minimisers of mu_1..mu_3 on (Q_star, 1). Throws OrderingViolated if
/// mu3_min < mu1_min < mu2_min < 0 or mu1(Q2) = mu2(Q2) fails.
StructureReport structure_report(const ProfileParams& p);

// ---- shooting ---------------------------------------------------------------

struct CaseI {
    double r_star;
};
struct CaseII {
    enum class Subcase { A, B, C };
    double tau;
    Subcase subcase;
    double Q_tau;
};
struct CaseIII {
    double Q_tau;
};
using ShotOutcome = std::variant<CaseI, CaseII, CaseIII>;

inline bool is_case_i(const ShotOutcome& o) { return std::holds_alternative<CaseI>(o); }
const char* case_name(const ShotOutcome& o);

struct ShotOptions {
    double r_max = 200.0;
    double flat_tol = 1e-9;
    double rtol = 1e-10;
    double atol = 1e-13;
    double r0 = 1e-6;
    /// Uniform sample spacing in r; 0 records no samples.
    double sample_dr = 0.0;
};

struct ProfileSamples {
    std::vector<double> r, Q, Q_r, Q_rr;
    std::size_t size() const noexcept { return r.size(); }
};

struct ShotResult {
    ShotOutcome outcome;
    ProfileSamples samples;
    std::size_t steps = 0;
};

/// Integrates the IVP from the regular series start until an event:
/// Q <= Q_star (CaseI), Q_r >= 0 (CaseII) or flat at r_max (CaseIII).
/// Throws Indeterminate when r_max is reached without any of them.
ShotResult integrate_shot(const ProfileParams& p, const ShotOptions& opts = {});

/// Q, Q_r, Q_rr and the third derivative the ODE prescribes at radius r > 0.
double third_derivative(double r, double Q, double Q_r, double Q_rr, const ProfileParams& p);

struct ProfileSolution {
    ProfileParams params;  ///< mu = mu_c
    ProfileSamples samples;
    double Q_tau = 0.0;
    double Q_star = 0.0;
};

struct MuSearchOptions {
    double bisect_tol = 1e-15;
    ShotOptions shot{.rtol = 1e-12, .atol = 1e-15};
    double sample_dr = 0.01;
    /// Samples are kept while the two bracketing trajectories agree to this.
    double divergence_tol = 1e-9;
    /// Shots that reach shot.r_max without an event are repeated with r_max
    /// doubled, up to this radius.
    double r_max_limit = 12800.0;
};

struct MuSearchResult {
    double mu_c;
    double mu_lo;  ///< last bracket endpoint classified CaseI
    StructureReport structure;
    ProfileSolution solution;
    int bisections = 0;
    /// False when bisection stopped early because a shot found no event
    /// before r_max_limit (slow algebraic tails).
    bool resolved = true;
};

/// Bisection for mu_c = sup A on [mu3_min (1 + 1e-3), mu2_min].
MuSearchResult find_mu_c(const ProfileParams& p, const MuSearchOptions& opts = {});

/// Limit of Q from three equally spaced radii at the end of the samples
/// (Aitken extrapolation; falls back to the last value).
double extrapolate_limit(const ProfileSamples& s);

/// Decaying solution of the tail equation linearised about Q_tau:
/// Q - Q_tau ~ amplitude r^-nu K_nu(lambda r), nu = (d-2)/2, lambda^2 = dF1/dQ(Q_tau).
struct LinearTail {
    double Q_tau;
    double lambda;
    double nu;
    double amplitude;
    double deviation(double r) const;
    /// (Q - Q_tau) / Q_r for the decaying mode at radius r.
    double ratio(double r) const;
};

/// Limit that makes sample i lie on the decaying linear tail, iterated from
/// `guess`. Throws NumericalError if dF1/dQ is not positive there.
double match_tail_limit(const ProfileSamples& s, std::size_t i, const ProfileParams& p, double guess);

/// Linear tail through the last sample of sol.
LinearTail linear_tail(const ProfileSolution& sol);

struct DecayFit {
    double M;  ///< envelope: |Q - Q_tau| <= M exp(-k r) on resolved samples
    double k;
    double L;  ///< dF1/dQ at Q_tau
    double r_min, r_max;  ///< fit window
    std::size_t points;
};

/// Exponential-decay check; nullopt when Q_tau >= (c/n)^(1/(n-1)).
/// Throws TailTooShort with fewer than 20 tail samples in (1e-10, 1e-2).
std::optional<DecayFit> decay_check(const ProfileSolution& sol);

/// Least-squares decay rate on samples restricted to [r_lo, r_hi].
DecayFit fit_decay_window(const ProfileSolution& sol, double r_lo, double r_hi);

// ---- rescaling and embedding -------------------------------------------------

struct WaveScaling {
    double q0_bar;
    double c_bar;
    double r_scale;
    double mu_bar;
};

/// c_bar = q0^(n-1) c, r_scale = q0^(n/2), mu_bar = q0^(1-n) mu.
WaveScaling scale_wave(double n, double c, double mu, double q0_bar);

struct PhysicalProfile {
    std::vector<double> r_bar;
    std::vector<double> Q_bar;
    double c_bar;
    double q0_bar;
};

PhysicalProfile rescale(const ProfileSolution& sol, double q0_bar);

/// Physical speed of the wave normalised to background 1: Q_tau^(1-n) c.
double physical_speed(const ProfileSolution& sol);

/// Half width at half maximum of Q_bar - 1 for q0_bar = 1/Q_tau.
double physical_half_width(const ProfileSolution& sol);

/// phi(x) = q0 Q(|x - center| / q0^(n/2)) with q0 = 1/Q_tau (periodic
/// minimum-image distance). Monotone cubic interpolation of the samples,
/// continued by the linear tail past the last sample and blended to exactly 1
/// over the final 5% of half the shortest period. Throws DomainTooSmall if the
/// profile at half the shortest period differs from 1 by 1e-8 or more.
Field embed_on_torus(const ProfileSolution& sol, const TorusGrid& grid, std::span<const double> center);

// ---- profile archive ----------------------------------------------------------

struct ProfileArchive {
    ProfileSolution solution;
    std::optional<DecayFit> decay;
};

/// "# d=..., n=..., c=..., mu_c=..., Q_tau=..., Q_star=..., k=..., M=..." then
/// "r,Q,Q_r,Q_rr" and one row per sample.
void write_profile_archive(std::ostream& out, const ProfileArchive& archive);
ProfileArchive read_profile_archive(std::istream& in);
void save_profile_archive(const std::filesystem::path& path, const ProfileArchive& archive);
ProfileArchive load_profile_archive(const std::filesystem::path& path);

}  // namespace magma::profile

#endif  // MAGMA_PROFILE_HPP
