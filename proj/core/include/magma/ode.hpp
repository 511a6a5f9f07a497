#ifndef MAGMA_ODE_HPP
#define MAGMA_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace magma::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-13;
};

/// Dormand-Prince 5(4) with first-same-as-last reuse and local extrapolation.
/// The driver owns the loop: each call to advance() performs one accepted step,
/// never stepping past `limit`. The previous and current (t, y, y') triples stay
/// available for cubic Hermite interpolation inside the last step.
template <std::size_t N>
class DormandPrince {
public:
    using Vec = State<N>;

    template <class Rhs>
    DormandPrince(Rhs& f, double t0, const Vec& y0, double h0, Tolerances tol)
        : t_(t0), y_(y0), h_(h0), tol_(tol) {
        f(t_, y_, dy_);
        t_prev_ = t_;
        y_prev_ = y_;
        dy_prev_ = dy_;
    }

    double t() const noexcept { return t_; }
    const Vec& y() const noexcept { return y_; }
    const Vec& dy() const noexcept { return dy_; }
    double t_prev() const noexcept { return t_prev_; }
    const Vec& y_prev() const noexcept { return y_prev_; }
    std::size_t accepted() const noexcept { return accepted_; }
    std::size_t rejected() const noexcept { return rejected_; }

    /// Component i at t in [t_prev, t] by cubic Hermite interpolation.
    double interpolate(std::size_t i, double t) const {
        const double h = t_ - t_prev_;
        if (h <= 0.0) return y_[i];
        const double s = (t - t_prev_) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return h00 * y_prev_[i] + h10 * h * dy_prev_[i] + h01 * y_[i] + h11 * h * dy_[i];
    }

    /// Returns false if the step size collapsed below the floating point
    /// resolution of t (the solution cannot be continued).
    template <class Rhs>
    bool advance(Rhs& f, double limit) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        Vec k2, k3, k4, k5, k6, k7, tmp, ynew;
        const Vec& k1 = dy_;
        while (true) {
            double h = std::min(h_, limit - t_);
            if (h <= std::abs(t_) * 1e-15) return false;
            const bool clipped = h < h_;

            for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1[i];
            f(t_ + c2 * h, tmp, k2);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
            f(t_ + c3 * h, tmp, k3);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(t_ + c4 * h, tmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(t_ + c5 * h, tmp, k5);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            f(t_ + h, tmp, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            f(t_ + h, ynew, k7);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / static_cast<double>(N));

            if (!std::isfinite(err)) {
                h_ = 0.2 * h;
                ++rejected_;
                continue;
            }
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t_prev_ = t_;
                y_prev_ = y_;
                dy_prev_ = dy_;
                t_ = (h == limit - t_) ? limit : t_ + h;
                y_ = ynew;
                dy_ = k7;
                ++accepted_;
                // A step clipped to hit `limit` says nothing about the natural size.
                if (!clipped) h_ = h * factor;
                else h_ = std::max(h_, h * factor);
                return true;
            }
            h_ = h * std::max(factor, 0.2);
            ++rejected_;
        }
    }

private:
    double t_;
    Vec y_, dy_;
    double t_prev_;
    Vec y_prev_, dy_prev_;
    double h_;
    Tolerances tol_;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

}  // namespace magma::ode

#endif  // MAGMA_ODE_HPP
