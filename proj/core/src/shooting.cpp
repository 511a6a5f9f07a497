#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "magma/ode.hpp"
#include "magma/profile.hpp"

namespace magma::profile {
namespace {

using Vec = ode::State<3>;

struct ShotRhs {
    ProfileParams p;
    void operator()(double r, const Vec& y, Vec& dy) const {
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = third_derivative(r, y[0], y[1], y[2], p);
    }
};

/// Root of component `comp` minus `level` inside the last accepted step.
double locate(const ode::DormandPrince<3>& st, std::size_t comp, double level) {
    double a = st.t_prev(), b = st.t();
    double fa = st.interpolate(comp, a) - level;
    for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, b); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = st.interpolate(comp, m) - level;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

struct RawShot {
    std::optional<ShotOutcome> outcome;
    ProfileSamples samples;
    std::size_t steps = 0;
    double r_end = 0.0;
    Vec y_end{};
};

RawShot run_shot(const ProfileParams& p, const ShotOptions& o, double Q_star) {
    if (!(p.mu < 0.0)) throw InvalidArgument("integrate_shot: mu must be negative");
    if (!(o.r_max > o.r0) || !(o.r0 > 0.0)) throw InvalidArgument("integrate_shot: need 0 < r0 < r_max");

    ShotRhs f{p};
    const double r0 = o.r0;
    // Regular expansion: Q = 1 + mu r^2/2, Q_r = mu r, Q_rr = mu (Q_rrr(0) = 0 by evenness).
    const Vec y0{1.0 + 0.5 * p.mu * r0 * r0, p.mu * r0, p.mu};
    ode::DormandPrince<3> st(f, r0, y0, 0.1 * r0, {o.rtol, o.atol});

    RawShot out;
    const bool sampling = o.sample_dr > 0.0;
    std::size_t next_sample = 1;
    if (sampling) {
        out.samples.r.push_back(0.0);
        out.samples.Q.push_back(1.0);
        out.samples.Q_r.push_back(0.0);
        out.samples.Q_rr.push_back(p.mu);
    }

    while (true) {
        double limit = o.r_max;
        if (sampling) limit = std::min(limit, static_cast<double>(next_sample) * o.sample_dr);
        if (!st.advance(f, limit)) break;
        const auto& y = st.y();
        const double r = st.t();

        const bool hit_floor = y[0] <= Q_star;
        const bool turned = y[1] >= 0.0;
        if (hit_floor || turned) {
            const double r_floor = hit_floor ? locate(st, 0, Q_star) : std::numeric_limits<double>::infinity();
            const double r_turn = turned ? locate(st, 1, 0.0) : std::numeric_limits<double>::infinity();
            if (r_floor <= r_turn) {
                out.outcome = CaseI{r_floor};
            } else {
                const double Q_tau = st.interpolate(0, r_turn);
                const double Q_rr = st.interpolate(2, r_turn);
                auto sub = CaseII::Subcase::A;
                if (std::abs(Q_tau - Q_star) <= 1e-9) sub = CaseII::Subcase::C;
                else if (std::abs(Q_rr) <= 1e-9) sub = CaseII::Subcase::B;
                out.outcome = CaseII{r_turn, sub, Q_tau};
            }
            out.r_end = r;
            out.y_end = y;
            break;
        }

        if (sampling && r == limit) {
            out.samples.r.push_back(r);
            out.samples.Q.push_back(y[0]);
            out.samples.Q_r.push_back(y[1]);
            out.samples.Q_rr.push_back(y[2]);
            ++next_sample;
        }
        if (r >= o.r_max) {
            out.r_end = r;
            out.y_end = y;
            if (std::abs(y[1]) <= o.flat_tol && std::abs(y[2]) <= o.flat_tol && y[0] > Q_star) {
                double Q_tau = y[0];
                if (sampling && out.samples.size() >= 9) Q_tau = extrapolate_limit(out.samples);
                out.outcome = CaseIII{Q_tau};
            }
            break;
        }
    }
    out.steps = st.accepted();
    return out;
}

}  // namespace

double third_derivative(double r, double Q, double Q_r, double Q_rr, const ProfileParams& p) {
    if (!(Q > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double qn1 = std::pow(Q, p.n - 1.0);
    const double qn = qn1 * Q;
    // (Q_rr/r - Q_r/r^2) written to keep the near-origin cancellation exact.
    const double bend = (Q_rr - Q_r / r) / r;
    return (Q_r * (1.0 - p.n / p.c * qn1) - p.n * qn1 * Q_r * Q_rr) / qn - (p.d - 1.0) * bend;
}

const char* case_name(const ShotOutcome& o) {
    switch (o.index()) {
        case 0: return "CaseI";
        case 1: return "CaseII";
        default: return "CaseIII";
    }
}

ShotResult integrate_shot(const ProfileParams& p, const ShotOptions& opts) {
    auto raw = run_shot(p, opts, q_star(p.n));
    if (!raw.outcome)
        throw Indeterminate("integrate_shot: reached r_max = " + std::to_string(opts.r_max) +
                            " without an event (|Q_r| = " + std::to_string(std::abs(raw.y_end[1])) +
                            "); enlarge r_max");
    return {*raw.outcome, std::move(raw.samples), raw.steps};
}

double extrapolate_limit(const ProfileSamples& s) {
    const std::size_t n = s.size();
    if (n == 0) throw InvalidArgument("extrapolate_limit: no samples");
    if (n < 9) return s.Q.back();
    const std::size_t last = n - 1;
    const std::size_t gap = last / 8;
    const double q1 = s.Q[last - 2 * gap], q2 = s.Q[last - gap], q3 = s.Q[last];
    const double d1 = q2 - q1, d2 = q3 - q2;
    const double ratio = d2 / d1;
    if (!(d1 != 0.0) || !(ratio > 0.0 && ratio < 1.0)) return q3;
    return q3 - d2 * ratio / (1.0 - ratio);
}

MuSearchResult find_mu_c(const ProfileParams& p0, const MuSearchOptions& opts) {
    validate(p0);
    MuSearchResult res{};
    res.structure = structure_report(p0);
    const double Q_star = res.structure.Q_star;

    // Bisection shots are sampled exactly like the returned profile so that
    // the final bracket endpoints are the trajectories that were classified.
    // Shots close to mu_c linger near the limit, longer the weaker the tail
    // decays; r_max grows until the shot reaches an event.
    ShotOptions so = opts.shot;
    so.sample_dr = opts.sample_dr;
    auto shoot = [&](double mu) -> std::optional<RawShot> {
        ProfileParams p = p0;
        p.mu = mu;
        for (;;) {
            auto raw = run_shot(p, so, Q_star);
            if (raw.outcome) return raw;
            if (so.r_max >= opts.r_max_limit) return std::nullopt;
            so.r_max = std::min(2.0 * so.r_max, opts.r_max_limit);
        }
    };

    double lo = res.structure.mu3_min - std::abs(res.structure.mu3_min) * 1e-3;
    double hi = res.structure.mu2_min;
    auto lower = shoot(lo);
    auto upper = shoot(hi);
    if (!lower || !is_case_i(*lower->outcome)) throw BracketInvalid("find_mu_c: lower bracket is not CaseI");
    if (!upper) throw Indeterminate("find_mu_c: upper bracket shot has no event");
    if (is_case_i(*upper->outcome)) throw BracketInvalid("find_mu_c: upper bracket is CaseI");

    while (hi - lo > opts.bisect_tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        auto shot = shoot(mid);
        // No event before r_max_limit: mu_c is resolved as far as shots can tell.
        if (!shot) {
            res.resolved = false;
            break;
        }
        if (is_case_i(*shot->outcome)) {
            lo = mid;
            lower = std::move(shot);
        } else {
            hi = mid;
            upper = std::move(shot);
        }
        ++res.bisections;
    }
    res.mu_c = hi;
    res.mu_lo = lo;
    ProfileParams p_hi = p0;
    p_hi.mu = hi;

    // The hi shot tracks the wave profile until its unstable mode grows; keep
    // the stretch on which it still agrees with the CaseI neighbour.
    const std::size_t common = std::min(upper->samples.size(), lower->samples.size());
    std::vector<double> spread(common);
    std::size_t keep = common;
    for (std::size_t i = 0; i < common; ++i) {
        spread[i] = std::abs(upper->samples.Q[i] - lower->samples.Q[i]);
        if (keep == common && spread[i] > opts.divergence_tol) keep = i;
    }
    if (keep < 16) throw NumericalError("find_mu_c: bracketing trajectories diverge immediately");
    auto& s = upper->samples;
    auto truncate = [&](std::size_t n) {
        s.r.resize(n);
        s.Q.resize(n);
        s.Q_r.resize(n);
        s.Q_rr.resize(n);
    };
    truncate(keep);
    for (std::size_t i = 1; i < keep; ++i)
        if (!(s.Q_r[i] < 0.0)) throw NumericalError("find_mu_c: profile is not strictly decreasing");

    double Q_tau;
    if (std::holds_alternative<CaseIII>(*upper->outcome)) {
        Q_tau = std::get<CaseIII>(*upper->outcome).Q_tau;
    } else if (!(dF1_dQ(extrapolate_limit(s), p0) > 0.0)) {
        // Algebraic tail: the decaying linear mode does not exist and the
        // limit is only extrapolated.
        Q_tau = extrapolate_limit(s);
    } else {
        // Each tail sample implies a limit through the decaying linear mode.
        // The implied limits plateau where the nonlinear remainder has died
        // out and the growing mode (seeded by integration error) is still
        // small; take the flattest point of the plateau.
        Q_tau = extrapolate_limit(s);
        std::vector<double> implied(keep, std::numeric_limits<double>::quiet_NaN());
        constexpr std::size_t w = 25;
        std::size_t best = keep - 1;
        for (int pass = 0; pass < 3; ++pass) {
            const double L = dF1_dQ(Q_tau, p0);
            if (!(L > 0.0)) throw NumericalError("find_mu_c: tail is not exponentially decaying");
            const LinearTail tail{Q_tau, std::sqrt(L), 0.5 * (p0.d - 2.0), 1.0};
            for (std::size_t i = 1; i < keep; ++i)
                if (std::abs(s.Q[i] - Q_tau) < 1e-3) implied[i] = s.Q[i] - tail.ratio(s.r[i]) * s.Q_r[i];
            double flattest = std::numeric_limits<double>::infinity();
            for (std::size_t i = w; i + w < keep; ++i) {
                const double var = std::abs(implied[i + w] - implied[i - w]);
                if (var < flattest) {
                    flattest = var;
                    best = i;
                }
            }
            if (!std::isfinite(flattest)) throw TailTooShort("find_mu_c: no linear tail region in the profile");
            Q_tau = implied[best];
        }
        // Drop samples whose implied limit drifts by more than 1% of their deviation.
        std::size_t clean = keep;
        for (std::size_t i = best; i < keep; ++i) {
            if (std::abs(implied[i] - Q_tau) > 1e-2 * std::abs(s.Q[i] - Q_tau)) {
                clean = i;
                break;
            }
        }
        if (clean < 16) throw NumericalError("find_mu_c: profile tail is dominated by shot contamination");
        truncate(clean);
    }

    res.solution.params = p_hi;
    res.solution.samples = std::move(s);
    res.solution.Q_star = Q_star;
    res.solution.Q_tau = Q_tau;
    if (!(res.solution.Q_tau > Q_star && res.solution.Q_tau < 1.0))
        throw NumericalError("find_mu_c: limit Q_tau outside (Q_star, 1)");
    return res;
}

double LinearTail::deviation(double r) const {
    return amplitude * std::pow(r, -nu) * boost::math::cyl_bessel_k(std::abs(nu), lambda * r);
}

double LinearTail::ratio(double r) const {
    // d/dr [r^-nu K_nu(lambda r)] = -lambda r^-nu K_{nu+1}(lambda r).
    const double x = lambda * r;
    return -boost::math::cyl_bessel_k(std::abs(nu), x) / (lambda * boost::math::cyl_bessel_k(nu + 1.0, x));
}

double match_tail_limit(const ProfileSamples& s, std::size_t i, const ProfileParams& p, double guess) {
    if (i >= s.size() || !(s.r[i] > 0.0)) throw InvalidArgument("match_tail_limit: sample index out of range");
    double Q_tau = guess;
    for (int it = 0; it < 100; ++it) {
        const double L = dF1_dQ(Q_tau, p);
        if (!(L > 0.0)) throw NumericalError("match_tail_limit: tail is not exponentially decaying");
        const LinearTail tail{Q_tau, std::sqrt(L), 0.5 * (p.d - 2.0), 1.0};
        const double next = s.Q[i] - tail.ratio(s.r[i]) * s.Q_r[i];
        const bool done = std::abs(next - Q_tau) <= 1e-16;
        Q_tau = next;
        if (done) break;
    }
    return Q_tau;
}

LinearTail linear_tail(const ProfileSolution& sol) {
    const auto& s = sol.samples;
    if (s.size() < 2) throw InvalidArgument("linear_tail: too few samples");
    const double L = dF1_dQ(sol.Q_tau, sol.params);
    if (!(L > 0.0)) throw NumericalError("linear_tail: tail is not exponentially decaying");
    LinearTail tail{sol.Q_tau, std::sqrt(L), 0.5 * (sol.params.d - 2.0), 1.0};
    const double r = s.r.back();
    tail.amplitude = (s.Q.back() - sol.Q_tau) / tail.deviation(r);
    return tail;
}

DecayFit fit_decay_window(const ProfileSolution& sol, double r_lo, double r_hi) {
    const auto& s = sol.samples;
    const double spread = 0.5 * (sol.params.d - 1.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dev = std::abs(s.Q[i] - sol.Q_tau);
        if (s.r[i] < r_lo || s.r[i] > r_hi || !(s.r[i] > 0.0) || !(dev > 1e-10 && dev < 1e-2)) continue;
        // Linearised tail ~ r^-((d-1)/2) exp(-k r); remove the algebraic factor.
        const double x = s.r[i], y = std::log(dev) + spread * std::log(x);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        ++m;
    }
    if (m < 20) throw TailTooShort("decay fit: only " + std::to_string(m) + " tail samples in (1e-10, 1e-2)");
    const double mm = static_cast<double>(m);
    const double slope = (mm * sxy - sx * sy) / (mm * sxx - sx * sx);
    DecayFit fit{};
    fit.k = -slope;
    fit.r_min = lo;
    fit.r_max = hi;
    fit.points = m;
    fit.L = dF1_dQ(sol.Q_tau, sol.params);
    double M = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dev = std::abs(s.Q[i] - sol.Q_tau);
        if (dev > 1e-10) M = std::max(M, dev * std::exp(fit.k * s.r[i]));
    }
    fit.M = M;
    return fit;
}

std::optional<DecayFit> decay_check(const ProfileSolution& sol) {
    const auto& p = sol.params;
    const double threshold = std::pow(p.c / p.n, 1.0 / (p.n - 1.0));
    if (!(sol.Q_tau < threshold)) return std::nullopt;
    auto fit = fit_decay_window(sol, 0.0, std::numeric_limits<double>::infinity());
    if (!(fit.L > 0.0)) throw NumericalError("decay_check: dF1/dQ at Q_tau is not positive");
    return fit;
}

}  // namespace magma::profile
