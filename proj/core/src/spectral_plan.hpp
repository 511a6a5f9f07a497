#ifndef MAGMA_SRC_SPECTRAL_PLAN_HPP
#define MAGMA_SRC_SPECTRAL_PLAN_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "magma/grid.hpp"

namespace magma::detail {

using cplx = std::complex<double>;

/// Real-to-half-complex transforms and wavenumber tables for one grid shape.
/// Shared between threads: execution uses FFTW's new-array interface, which is
/// thread safe; planning happens once under a global lock.
class SpectralPlan {
public:
    static std::shared_ptr<const SpectralPlan> for_grid(const TorusGrid& grid);

    explicit SpectralPlan(const TorusGrid& grid);
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    std::size_t real_size() const noexcept { return real_size_; }
    std::size_t half_size() const noexcept { return half_size_; }
    int dim() const noexcept { return dim_; }

    /// Normalised forward transform: out[0] is the mean.
    void forward(const double* in, cplx* out) const;
    /// Unnormalised inverse. `in` is clobbered.
    void inverse(cplx* in, double* out) const;

    /// Derivative multiplier k_axis per half-spectrum entry, 0 on the axis Nyquist plane.
    const std::vector<double>& dk(int axis) const { return dk_[static_cast<std::size_t>(axis)]; }
    /// sum_j dk_j^2 (eigenvalues of -sum_j D_j D_j).
    const std::vector<double>& dk2() const { return dk2_; }
    /// Exact |k|^2 including Nyquist modes.
    const std::vector<double>& k2() const { return k2_; }
    /// Number of full-lattice modes represented by each half-spectrum entry (1 or 2).
    const std::vector<double>& multiplicity() const { return mult_; }
    /// Entries lying on some axis Nyquist plane.
    const std::vector<unsigned char>& nyquist() const { return nyquist_; }

    /// Half-spectrum flat index -> full-lattice flat index.
    const std::vector<std::size_t>& half_to_full() const { return half_to_full_; }

private:
    int dim_;
    std::size_t real_size_;
    std::size_t half_size_;
    void* forward_plan_;
    void* inverse_plan_;
    std::vector<std::vector<double>> dk_;
    std::vector<double> dk2_;
    std::vector<double> k2_;
    std::vector<double> mult_;
    std::vector<unsigned char> nyquist_;
    std::vector<std::size_t> half_to_full_;
};

}  // namespace magma::detail

#endif  // MAGMA_SRC_SPECTRAL_PLAN_HPP
