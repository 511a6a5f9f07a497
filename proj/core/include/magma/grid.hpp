#ifndef MAGMA_GRID_HPP
#define MAGMA_GRID_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace magma {

/// Uniform periodic grid on the d-torus. Axis d-1 is the propagation axis and
/// is stored last (contiguous) in row-major field layouts.
class TorusGrid {
public:
    TorusGrid(std::vector<std::size_t> n_points, std::vector<double> lengths);

    /// d axes with the same point count and period.
    static TorusGrid cube(int d, std::size_t n, double length = 2.0 * std::numbers::pi);

    int dim() const noexcept { return static_cast<int>(n_points_.size()); }
    const std::vector<std::size_t>& n_points() const noexcept { return n_points_; }
    const std::vector<double>& lengths() const noexcept { return lengths_; }
    std::size_t n_points(int axis) const { return n_points_.at(static_cast<std::size_t>(axis)); }
    double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis)); }

    std::size_t size() const noexcept { return size_; }
    double spacing(int axis) const { return length(axis) / static_cast<double>(n_points(axis)); }
    double cell_volume() const noexcept;
    double volume() const noexcept;

    /// Signed mode number m in [-N/2, N/2) stored at FFT index `index` along `axis`.
    int mode_number(int axis, std::size_t index) const;
    /// Physical wavenumber 2*pi*m/L.
    double wavenumber(int axis, int m) const;

    /// Row-major stride of `axis` in a field layout.
    std::size_t stride(int axis) const;
    /// Multi-index of flat position `flat`.
    std::vector<std::size_t> unravel(std::size_t flat) const;
    std::size_t ravel(std::span<const std::size_t> index) const;
    /// Coordinate of grid point `i` along `axis` (origin at 0).
    double coordinate(int axis, std::size_t i) const { return static_cast<double>(i) * spacing(axis); }

    bool operator==(const TorusGrid& other) const = default;

private:
    std::vector<std::size_t> n_points_;
    std::vector<double> lengths_;
    std::size_t size_ = 0;
};

/// Real scalar field on a TorusGrid. Immutable once built; every constructor
/// rejects NaN and Inf.
class Field {
public:
    Field(TorusGrid grid, std::vector<double> values);

    static Field constant(const TorusGrid& grid, double value);

    /// Samples f(x) at every grid point; `f` receives the coordinate vector.
    template <class F>
    static Field sample(const TorusGrid& grid, F&& f) {
        std::vector<double> values(grid.size());
        std::vector<double> x(static_cast<std::size_t>(grid.dim()));
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
            auto idx = grid.unravel(flat);
            for (int j = 0; j < grid.dim(); ++j) x[static_cast<std::size_t>(j)] = grid.coordinate(j, idx[static_cast<std::size_t>(j)]);
            values[flat] = f(std::span<const double>(x));
        }
        return Field(grid, std::move(values));
    }

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Pointwise transform.
    template <class F>
    Field map(F&& f) const {
        std::vector<double> out(values_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(values_[i]);
        return Field(grid_, std::move(out));
    }

private:
    TorusGrid grid_;
    std::vector<double> values_;
};

/// Full-lattice Fourier coefficients, FFT index order on every axis. The
/// coefficient of k = 0 is the field mean.
class Spectrum {
public:
    Spectrum(TorusGrid grid, std::vector<std::complex<double>> coeffs);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
    /// Coefficient of signed mode numbers m (one per axis).
    std::complex<double> coeff(std::span<const int> m) const;
    /// Maximum of |c(m) - conj(c(-m))| over the lattice.
    double symmetry_defect() const;

private:
    TorusGrid grid_;
    std::vector<std::complex<double>> coeffs_;
};

Spectrum forward_transform(const Field& f);

/// Throws InvalidArgument when the coefficients are not conjugate symmetric
/// (defect above 1e-12 of the largest coefficient).
Field inverse_transform(const Spectrum& s);

/// d/dx_axis via the multiplier i*k_axis; the Nyquist mode is dropped.
Field spectral_derivative(const Field& f, int axis);

/// (sum_k (1+|k|^2)^s |f_k|^2 * volume)^(1/2); hs_norm(f, 0) is the L2 norm.
double hs_norm(const Field& f, double s);

struct FieldStats {
    double min;
    double max;
    /// sup |1/f|, +infinity when min <= 0.
    double inv_sup;
};

FieldStats field_stats(const Field& f);

double mean(const Field& f);
/// Quadrature L2 inner product (sum times cell volume).
double inner_product(const Field& a, const Field& b);
double l2_norm(const Field& f);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field operator*(const Field& a, const Field& b);

/// Shift a field by an arbitrary real displacement using the Fourier phase
/// multiplier exp(-i k.shift).
Field translate(const Field& f, std::span<const double> shift);

}  // namespace magma

#endif  // MAGMA_GRID_HPP
