#ifndef MAGMA_ELLIPTIC_HPP
#define MAGMA_ELLIPTIC_HPP

#include <optional>

#include "magma/grid.hpp"

namespace magma {

/// L_a u = g with L_a u := u - div(a grad u) on the torus.
class EllipticProblem {
public:
    /// Throws NonPositiveCoefficient if min(a) <= 0 and GridMismatch if a and g
    /// live on different grids. max_iter <= 0 selects 10 * max(n_points).
    EllipticProblem(Field a, Field g, double tol = 1e-10, int max_iter = 0);

    const Field& a() const noexcept { return a_; }
    const Field& g() const noexcept { return g_; }
    double tol() const noexcept { return tol_; }
    int max_iter() const noexcept { return max_iter_; }

    /// Starting iterate for the solver; zero when unset.
    std::optional<Field> initial_guess;

private:
    Field a_;
    Field g_;
    double tol_;
    int max_iter_;
};

struct EllipticSolution {
    Field u;
    int iterations;
    /// ||L_a u - g|| / ||g|| of the returned iterate (0 when g = 0).
    double residual;
};

/// u - sum_j d_j(a d_j u), derivatives spectral.
Field apply_elliptic(const Field& a, const Field& u);

/// Preconditioned conjugate gradients; the preconditioner is the constant
/// coefficient inverse (I - mean(a) Laplacian)^-1. The returned iterate always
/// satisfies ||L_a u - g||_2 <= tol ||g||_2, otherwise NotConverged is thrown.
EllipticSolution solve_elliptic(const EllipticProblem& problem);

/// ||solve(a, g) - solve(b, g)|| measured in the H^s grid norm.
double lipschitz_gap(const Field& a, const Field& b, const Field& g, double tol = 1e-10, double s = 1.0);

}  // namespace magma

#endif  // MAGMA_ELLIPTIC_HPP
