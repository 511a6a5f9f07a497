#include "magma/evolution.hpp"

#include <cmath>
#include <limits>

#include "magma/elliptic.hpp"
#include "magma/error.hpp"

namespace magma {
namespace {

struct RhsEval {
    Field value;
    int cg_iters;
};

RhsEval rhs_eval(const Field& phi, const EvolveConfig& cfg, const Field* guess) {
    const auto st = field_stats(phi);
    if (st.min <= 0.0) throw PositivityLost(st.min);
    const double n = cfg.n_exponent;
    auto a = phi.map([n](double v) { return std::pow(v, n); });
    auto g = -1.0 * spectral_derivative(a, phi.grid().dim() - 1);
    EllipticProblem problem(std::move(a), std::move(g), cfg.elliptic_tol);
    if (guess) problem.initial_guess = *guess;
    auto sol = solve_elliptic(problem);
    return {std::move(sol.u), sol.iterations};
}

/// RK4 that warm-starts each elliptic solve from the previous stage.
class Rk4 {
public:
    explicit Rk4(const EvolveConfig& cfg) : cfg_(cfg) {}

    Field step(const Field& phi, double dt) {
        cg_iters_ = 0;
        auto k1 = eval(phi);
        auto k2 = eval(phi + (0.5 * dt) * k1);
        auto k3 = eval(phi + (0.5 * dt) * k2);
        auto k4 = eval(phi + dt * k3);
        std::vector<double> out(phi.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = phi[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return Field(phi.grid(), std::move(out));
    }

    int cg_iters() const noexcept { return cg_iters_; }

private:
    Field eval(const Field& phi) {
        auto r = rhs_eval(phi, cfg_, last_ ? &*last_ : nullptr);
        cg_iters_ += r.cg_iters;
        last_ = r.value;
        return std::move(r.value);
    }

    const EvolveConfig& cfg_;
    std::optional<Field> last_;
    int cg_iters_ = 0;
};

}  // namespace

double default_monitor_index(int d) {
    const double bound = 0.5 * d + std::floor(0.5 * d) + 2.0;
    return std::floor(bound) + 1.0;
}

double blowup_monitor(const Field& phi, double s) {
    return hs_norm(phi.map([](double v) { return v - 1.0; }), s) + field_stats(phi).inv_sup;
}

double measure_mass(const Field& phi) {
    double s = 0.0;
    for (double v : phi.values()) s += v - 1.0;
    return s * phi.grid().cell_volume();
}

Field rhs(const Field& phi, const EvolveConfig& cfg) { return rhs_eval(phi, cfg, nullptr).value; }

Field step_rk4(const Field& phi, double dt, const EvolveConfig& cfg) {
    Rk4 rk(cfg);
    return rk.step(phi, dt);
}

const char* verdict_name(const Verdict& v) {
    struct Names {
        const char* operator()(const CompletedToTEnd&) const { return "CompletedToTEnd"; }
        const char* operator()(const ThresholdExceeded&) const { return "ThresholdExceeded"; }
        const char* operator()(const EllipticFailure&) const { return "EllipticFailure"; }
        const char* operator()(const PositivityLostAt&) const { return "PositivityLost"; }
    };
    return std::visit(Names{}, v);
}

EvolveResult evolve(const Field& phi0, const EvolveConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw InvalidArgument("evolve: dt and t_end must be positive");
    if (!(cfg.n_exponent > 0.0)) throw InvalidArgument("evolve: n must be positive");
    const auto st0 = field_stats(phi0);
    if (st0.min <= 0.0) throw InvalidArgument("evolve: initial data must be strictly positive");
    const double s = cfg.s_monitor.value_or(default_monitor_index(phi0.grid().dim()));
    const double monitor0 = blowup_monitor(phi0, s);
    if (!(cfg.blowup_threshold > 0.0)) throw InvalidArgument("evolve: blowup_threshold must be positive");

    EvolveResult result{{}, {}, {CompletedToTEnd{}, monitor0, {0.0}, {monitor0}}, phi0, 0.0};
    result.log.push_back({0.0, measure_mass(phi0), monitor0, st0.min, 0});
    if (cfg.snapshot_every > 0) result.snapshots.push_back({0.0, 0, phi0, monitor0});
    // Data already past the threshold is reported, not rejected.
    if (monitor0 > cfg.blowup_threshold) {
        result.report.verdict = ThresholdExceeded{0.0};
        return result;
    }

    Rk4 rk(cfg);
    Field phi = phi0;
    double t = 0.0;
    std::size_t step = 0;
    const double eps = 1e-12 * cfg.t_end;
    while (t < cfg.t_end - eps) {
        const double h = std::min(cfg.dt, cfg.t_end - t);
        try {
            phi = rk.step(phi, h);
        } catch (const PositivityLost&) {
            result.report.verdict = PositivityLostAt{t};
            break;
        } catch (const NotConverged&) {
            result.report.verdict = EllipticFailure{t};
            break;
        } catch (const NonPositiveCoefficient&) {
            result.report.verdict = EllipticFailure{t};
            break;
        } catch (const NonFiniteValue&) {
            result.report.verdict = ThresholdExceeded{t + h};
            result.report.final_monitor = std::numeric_limits<double>::infinity();
            break;
        }
        ++step;
        const double next = static_cast<double>(step) * cfg.dt;
        t = next >= cfg.t_end - eps ? cfg.t_end : next;

        const auto st = field_stats(phi);
        const double monitor = st.min > 0.0 ? blowup_monitor(phi, s) : std::numeric_limits<double>::infinity();
        result.report.times.push_back(t);
        result.report.monitor.push_back(monitor);
        result.report.final_monitor = monitor;
        result.log.push_back({t, measure_mass(phi), monitor, st.min, rk.cg_iters()});
        result.final_state = phi;
        result.final_time = t;
        if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0)
            result.snapshots.push_back({t, step, phi, monitor});

        if (st.min <= 0.0) {
            result.report.verdict = PositivityLostAt{t};
            break;
        }
        if (monitor > cfg.blowup_threshold) {
            result.report.verdict = ThresholdExceeded{t};
            break;
        }
    }
    return result;
}

}  // namespace magma
