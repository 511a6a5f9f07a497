#include "spectral_plan.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace magma::detail {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

using PlanKey = std::pair<std::vector<std::size_t>, std::vector<double>>;

}  // namespace

std::shared_ptr<const SpectralPlan> SpectralPlan::for_grid(const TorusGrid& grid) {
    // The mutex must outlive the cache: plans lock it on destruction.
    auto& mutex = planner_mutex();
    static std::map<PlanKey, std::shared_ptr<const SpectralPlan>> cache;
    PlanKey key{grid.n_points(), grid.lengths()};
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const SpectralPlan>(grid);
    cache.emplace(std::move(key), plan);
    return plan;
}

// Constructed only through for_grid, which already holds the planner lock.
SpectralPlan::SpectralPlan(const TorusGrid& grid) : dim_(grid.dim()), real_size_(grid.size()) {
    const auto d = static_cast<std::size_t>(dim_);
    std::vector<std::size_t> half_dims(grid.n_points());
    half_dims[d - 1] = half_dims[d - 1] / 2 + 1;
    half_size_ = 1;
    for (auto h : half_dims) half_size_ *= h;

    std::vector<int> n(d);
    for (std::size_t j = 0; j < d; ++j) n[j] = static_cast<int>(grid.n_points()[j]);

    double* rbuf = fftw_alloc_real(real_size_);
    fftw_complex* cbuf = fftw_alloc_complex(half_size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_r2c(dim_, n.data(), rbuf, cbuf, flags);
    inverse_plan_ = fftw_plan_dft_c2r(dim_, n.data(), cbuf, rbuf, flags);
    fftw_free(cbuf);
    fftw_free(rbuf);

    dk_.assign(d, std::vector<double>(half_size_));
    dk2_.assign(half_size_, 0.0);
    k2_.assign(half_size_, 0.0);
    mult_.assign(half_size_, 1.0);
    nyquist_.assign(half_size_, 0);
    half_to_full_.assign(half_size_, 0);

    std::vector<std::size_t> idx(d, 0);
    for (std::size_t h = 0; h < half_size_; ++h) {
        std::size_t full = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t nj = grid.n_points()[j];
            const int m = grid.mode_number(static_cast<int>(j), idx[j]);
            const double k = grid.wavenumber(static_cast<int>(j), m);
            const bool nyq = idx[j] == nj / 2;
            dk_[j][h] = nyq ? 0.0 : k;
            dk2_[h] += nyq ? 0.0 : k * k;
            k2_[h] += k * k;
            if (nyq) nyquist_[h] = 1;
            full = full * nj + idx[j];
        }
        const std::size_t last = idx[d - 1];
        const std::size_t n_last = grid.n_points()[d - 1];
        mult_[h] = (last == 0 || last == n_last / 2) ? 1.0 : 2.0;
        half_to_full_[h] = full;

        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < half_dims[j]) break;
            idx[j] = 0;
        }
    }
}

SpectralPlan::~SpectralPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void SpectralPlan::forward(const double* in, cplx* out) const {
    // r2c does not modify its input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < half_size_; ++i) out[i] *= scale;
}

void SpectralPlan::inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(in),
                         out);
}

}  // namespace magma::detail
