#include <algorithm>
#include <cmath>
#include <string>

#include "magma/profile.hpp"

namespace magma::profile {
namespace {

// Q^e - 1 without cancellation near Q = 1.
double pow_m1(double Q, double e) { return std::expm1(e * std::log(Q)); }

void require_positive(double Q) {
    if (!(Q > 0.0)) throw InvalidArgument("structure functions need Q > 0 (got " + std::to_string(Q) + ")");
}

double g1(double Q, double n, double c) { return -pow_m1(Q, 1.0 - n) / (n - 1.0) - n / c * std::log(Q); }

double g2(double Q, double n, double c) {
    const double lq = std::log(Q);
    const double qn1 = pow_m1(Q, n + 1.0);  // Q^(n+1) - 1
    const double first = 0.5 * pow_m1(Q, 2.0) - qn1 / (n + 1.0);
    const double second = std::pow(Q, n + 1.0) * lq / (n + 1.0) - qn1 / ((n + 1.0) * (n + 1.0));
    return -first / (n - 1.0) - n / c * second;
}

double g3(double Q, double n, double c) {
    const double lq = std::log(Q);
    const double qm = pow_m1(Q, -(n + 1.0));  // Q^-(n+1) - 1
    const double ia = 0.5 * (pow_m1(Q, 1.0 - n) / (1.0 - n) + qm / (n + 1.0));
    const double ib = (lq + qm / (n + 1.0)) / (n + 1.0);
    const double ic = lq * lq / (2.0 * (n + 1.0));
    const double id = ib / (n + 1.0);
    return g1(Q, n, c) + n * (ia - ib) / (n - 1.0) + n * n / c * (ic - id);
}

double h3_unit(double Q, double n) {
    return 1.0 - n * std::log(Q) / (n + 1.0) - n / ((n + 1.0) * (n + 1.0)) * pow_m1(Q, -(n + 1.0));
}

constexpr double kInvPhi = 0.6180339887498949;

template <class F>
double golden_min(F&& f, double a, double b, double tol) {
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Grid scan for the basin, golden section inside it.
template <class F>
double locate_min(F&& f, double lo, double hi) {
    constexpr int kScan = 400;
    int best = 0;
    double best_val = f(lo);
    for (int i = 1; i <= kScan; ++i) {
        const double q = lo + (hi - lo) * i / kScan;
        const double v = f(q);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = lo + (hi - lo) * std::max(best - 1, 0) / kScan;
    const double b = lo + (hi - lo) * std::min(best + 1, kScan) / kScan;
    return golden_min(f, a, b, 1e-12);
}

}  // namespace

void validate(const ProfileParams& p) {
    if (!(p.d > 0.0)) throw InvalidArgument("profile: d must be positive");
    if (!(p.n >= 2.0 && p.n <= 3.0)) throw InvalidArgument("profile: n must lie in [2, 3]");
    if (!(p.c >= 1.55)) throw InvalidArgument("profile: c must be >= 1.55");
    if (!(p.c < p.n)) throw InvalidArgument("profile: c must be < n");
}

double g_fn(int i, double Q, const ProfileParams& p) {
    require_positive(Q);
    switch (i) {
        case 1: return g1(Q, p.n, p.c);
        case 2: return g2(Q, p.n, p.c);
        case 3: return g3(Q, p.n, p.c);
        default: throw InvalidArgument("structure function index must be 1, 2 or 3");
    }
}

double h_fn(int i, double Q, const ProfileParams& p) {
    require_positive(Q);
    switch (i) {
        case 1: return p.d;
        case 2: return p.d * pow_m1(Q, p.n + 1.0) / (p.n + 1.0);
        case 3: return p.d * h3_unit(Q, p.n);
        default: throw InvalidArgument("structure function index must be 1, 2 or 3");
    }
}

double F1(double Q, const ProfileParams& p) { return g_fn(1, Q, p) + h_fn(1, Q, p) * p.mu; }
double F2(double Q, const ProfileParams& p) { return g_fn(2, Q, p) + h_fn(2, Q, p) * p.mu; }
double F3(double Q, const ProfileParams& p) { return g_fn(3, Q, p) + h_fn(3, Q, p) * p.mu; }

double dF1_dQ(double Q, const ProfileParams& p) {
    require_positive(Q);
    return std::pow(Q, -p.n) - p.n / (p.c * Q);
}

double mu_curve(int i, double Q, const ProfileParams& p) {
    require_positive(Q);
    if (i == 2 && Q == 1.0) throw InvalidArgument("mu_2 is undefined at Q = 1 (h_2 vanishes)");
    if (i == 3 && Q <= q_star(p.n) + 1e-12) throw InvalidArgument("mu_3 needs Q > Q_star (h_3 vanishes at Q_star)");
    const double h = h_fn(i, Q, p);
    if (h == 0.0) throw InvalidArgument("mu curve undefined where h_i vanishes");
    return -g_fn(i, Q, p) / h;
}

double q_star(double n) {
    if (!(n > 0.0)) throw InvalidArgument("q_star: n must be positive");
    double lo = 1e-3, hi = 1.0 - 1e-9;
    // h3 < 0 at lo, > 0 at hi.
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h3_unit(mid, n) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

StructureReport structure_report(const ProfileParams& p) {
    validate(p);
    StructureReport rep{};
    rep.Q_star = q_star(p.n);
    rep.Q1 = std::pow(p.c / p.n, 1.0 / (p.n - 1.0));
    rep.mu1_min = mu_curve(1, rep.Q1, p);

    constexpr double eps = 1e-6;
    const double lo = rep.Q_star + eps, hi = 1.0 - eps;
    rep.Q2 = locate_min([&](double q) { return mu_curve(2, q, p); }, lo, hi);
    rep.Q3 = locate_min([&](double q) { return mu_curve(3, q, p); }, lo, hi);

    // Polish Q2 as the crossing mu_1 = mu_2, which is where mu_2' = 0.
    {
        auto diff = [&](double q) { return mu_curve(1, q, p) - mu_curve(2, q, p); };
        double a = std::max(lo, rep.Q2 - 1e-5), b = std::min(hi, rep.Q2 + 1e-5);
        double fa = diff(a), fb = diff(b);
        if (fa * fb < 0.0) {
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = diff(m);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            rep.Q2 = 0.5 * (a + b);
        }
    }
    rep.mu2_min = mu_curve(2, rep.Q2, p);
    rep.mu3_min = mu_curve(3, rep.Q3, p);

    if (!(rep.mu3_min < rep.mu1_min && rep.mu1_min < rep.mu2_min && rep.mu2_min < 0.0))
        throw OrderingViolated("structure: expected mu3_min < mu1_min < mu2_min < 0");
    if (std::abs(mu_curve(1, rep.Q2, p) - rep.mu2_min) > 1e-8)
        throw OrderingViolated("structure: mu_1 and mu_2 do not intersect at Q2");
    if (!(rep.Q2 < rep.Q1)) throw OrderingViolated("structure: expected Q2 < Q1");
    return rep;
}

WaveScaling scale_wave(double n, double c, double mu, double q0_bar) {
    if (!(q0_bar > 0.0)) throw InvalidArgument("rescale: q0_bar must be positive");
    return {q0_bar, std::pow(q0_bar, n - 1.0) * c, std::pow(q0_bar, 0.5 * n), std::pow(q0_bar, 1.0 - n) * mu};
}

}  // namespace magma::profile
