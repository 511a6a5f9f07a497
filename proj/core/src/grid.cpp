#include "magma/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "magma/error.hpp"
#include "spectral_plan.hpp"

namespace magma {

using detail::cplx;
using detail::SpectralPlan;

TorusGrid::TorusGrid(std::vector<std::size_t> n_points, std::vector<double> lengths)
    : n_points_(std::move(n_points)), lengths_(std::move(lengths)) {
    if (n_points_.empty()) throw InvalidArgument("grid needs at least one axis");
    if (n_points_.size() != lengths_.size())
        throw InvalidArgument("grid: n_points and lengths differ in length");
    size_ = 1;
    for (std::size_t j = 0; j < n_points_.size(); ++j) {
        if (n_points_[j] < 8 || n_points_[j] % 2 != 0)
            throw InvalidArgument("grid: point counts must be even and >= 8 (axis " +
                                  std::to_string(j) + " has " + std::to_string(n_points_[j]) + ")");
        if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j]))
            throw InvalidArgument("grid: periods must be positive and finite");
        size_ *= n_points_[j];
    }
}

TorusGrid TorusGrid::cube(int d, std::size_t n, double length) {
    if (d < 1) throw InvalidArgument("grid dimension must be >= 1");
    return TorusGrid(std::vector<std::size_t>(static_cast<std::size_t>(d), n),
                     std::vector<double>(static_cast<std::size_t>(d), length));
}

double TorusGrid::cell_volume() const noexcept {
    double v = 1.0;
    for (std::size_t j = 0; j < n_points_.size(); ++j) v *= lengths_[j] / static_cast<double>(n_points_[j]);
    return v;
}

double TorusGrid::volume() const noexcept {
    double v = 1.0;
    for (double l : lengths_) v *= l;
    return v;
}

int TorusGrid::mode_number(int axis, std::size_t index) const {
    const auto n = n_points(axis);
    const auto i = static_cast<long>(index);
    const auto half = static_cast<long>(n / 2);
    return static_cast<int>(i < half ? i : i - static_cast<long>(n));
}

double TorusGrid::wavenumber(int axis, int m) const {
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length(axis);
}

std::size_t TorusGrid::stride(int axis) const {
    std::size_t s = 1;
    for (int j = dim() - 1; j > axis; --j) s *= n_points(j);
    return s;
}

std::vector<std::size_t> TorusGrid::unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(n_points_.size());
    for (std::size_t j = n_points_.size(); j-- > 0;) {
        idx[j] = flat % n_points_[j];
        flat /= n_points_[j];
    }
    return idx;
}

std::size_t TorusGrid::ravel(std::span<const std::size_t> index) const {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < n_points_.size(); ++j) flat = flat * n_points_[j] + index[j];
    return flat;
}

Field::Field(TorusGrid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("field size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw NonFiniteValue();
}

Field Field::constant(const TorusGrid& grid, double value) {
    return Field(grid, std::vector<double>(grid.size(), value));
}

Spectrum::Spectrum(TorusGrid grid, std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw InvalidArgument("spectrum size does not match grid");
}

std::complex<double> Spectrum::coeff(std::span<const int> m) const {
    if (m.size() != static_cast<std::size_t>(grid_.dim())) throw InvalidArgument("mode has wrong rank");
    std::size_t flat = 0;
    for (int j = 0; j < grid_.dim(); ++j) {
        const auto n = static_cast<long>(grid_.n_points(j));
        long i = m[static_cast<std::size_t>(j)];
        i = ((i % n) + n) % n;
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    return coeffs_[flat];
}

double Spectrum::symmetry_defect() const {
    double defect = 0.0;
    const int d = grid_.dim();
    for (std::size_t flat = 0; flat < coeffs_.size(); ++flat) {
        auto idx = grid_.unravel(flat);
        for (int j = 0; j < d; ++j) {
            const auto n = grid_.n_points(j);
            auto& i = idx[static_cast<std::size_t>(j)];
            i = (n - i) % n;
        }
        const auto mirror = grid_.ravel(idx);
        defect = std::max(defect, std::abs(coeffs_[flat] - std::conj(coeffs_[mirror])));
    }
    return defect;
}

Spectrum forward_transform(const Field& f) {
    const auto& grid = f.grid();
    auto plan = SpectralPlan::for_grid(grid);
    std::vector<cplx> half(plan->half_size());
    plan->forward(f.values().data(), half.data());

    std::vector<cplx> full(grid.size());
    const auto& map = plan->half_to_full();
    for (std::size_t h = 0; h < half.size(); ++h) full[map[h]] = half[h];

    // Fill the other half by conjugate symmetry.
    const int d = grid.dim();
    const auto n_last = grid.n_points(d - 1);
    for (std::size_t flat = 0; flat < full.size(); ++flat) {
        auto idx = grid.unravel(flat);
        if (idx.back() <= n_last / 2) continue;
        for (int j = 0; j < d; ++j) {
            const auto n = grid.n_points(j);
            auto& i = idx[static_cast<std::size_t>(j)];
            i = (n - i) % n;
        }
        full[flat] = std::conj(full[grid.ravel(idx)]);
    }
    return Spectrum(grid, std::move(full));
}

Field inverse_transform(const Spectrum& s) {
    const auto& grid = s.grid();
    double scale = 0.0;
    for (const auto& c : s.coeffs()) scale = std::max(scale, std::abs(c));
    if (s.symmetry_defect() > 1e-12 * std::max(scale, std::numeric_limits<double>::min()))
        throw InvalidArgument("inverse_transform: coefficients are not conjugate symmetric");

    auto plan = SpectralPlan::for_grid(grid);
    std::vector<cplx> half(plan->half_size());
    const auto& map = plan->half_to_full();
    for (std::size_t h = 0; h < half.size(); ++h) half[h] = s.coeffs()[map[h]];
    std::vector<double> out(grid.size());
    plan->inverse(half.data(), out.data());
    return Field(grid, std::move(out));
}

Field spectral_derivative(const Field& f, int axis) {
    const auto& grid = f.grid();
    if (axis < 0 || axis >= grid.dim()) throw InvalidArgument("spectral_derivative: axis out of range");
    auto plan = SpectralPlan::for_grid(grid);
    std::vector<cplx> half(plan->half_size());
    plan->forward(f.values().data(), half.data());
    const auto& k = plan->dk(axis);
    for (std::size_t h = 0; h < half.size(); ++h) half[h] *= cplx(0.0, k[h]);
    std::vector<double> out(grid.size());
    plan->inverse(half.data(), out.data());
    return Field(grid, std::move(out));
}

double hs_norm(const Field& f, double s) {
    if (s < 0.0) throw InvalidArgument("hs_norm: s must be >= 0");
    auto plan = SpectralPlan::for_grid(f.grid());
    std::vector<cplx> half(plan->half_size());
    plan->forward(f.values().data(), half.data());
    const auto& k2 = plan->k2();
    const auto& mult = plan->multiplicity();
    double sum = 0.0;
    for (std::size_t h = 0; h < half.size(); ++h)
        sum += mult[h] * std::pow(1.0 + k2[h], s) * std::norm(half[h]);
    return std::sqrt(sum * f.grid().volume());
}

FieldStats field_stats(const Field& f) {
    const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
    FieldStats st{*lo, *hi, std::numeric_limits<double>::infinity()};
    if (st.min > 0.0) st.inv_sup = 1.0 / st.min;
    return st;
}

double mean(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

double inner_product(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid().cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner_product(f, f)); }

namespace {

template <class Op>
Field zip(const Field& a, const Field& b, Op op) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
    return Field(a.grid(), std::move(out));
}

}  // namespace

Field operator+(const Field& a, const Field& b) { return zip(a, b, std::plus<>{}); }
Field operator-(const Field& a, const Field& b) { return zip(a, b, std::minus<>{}); }
Field operator*(const Field& a, const Field& b) { return zip(a, b, std::multiplies<>{}); }
Field operator*(double s, const Field& a) {
    return a.map([s](double v) { return s * v; });
}

Field translate(const Field& f, std::span<const double> shift) {
    const auto& grid = f.grid();
    if (shift.size() != static_cast<std::size_t>(grid.dim())) throw InvalidArgument("translate: shift has wrong rank");
    auto plan = SpectralPlan::for_grid(grid);
    std::vector<cplx> half(plan->half_size());
    plan->forward(f.values().data(), half.data());
    const auto& nyq = plan->nyquist();
    for (std::size_t h = 0; h < half.size(); ++h) {
        if (nyq[h]) {
            half[h] = 0.0;
            continue;
        }
        double phase = 0.0;
        for (int j = 0; j < grid.dim(); ++j) phase += plan->dk(j)[h] * shift[static_cast<std::size_t>(j)];
        half[h] *= std::polar(1.0, -phase);
    }
    std::vector<double> out(grid.size());
    plan->inverse(half.data(), out.data());
    return Field(grid, std::move(out));
}

}  // namespace magma
