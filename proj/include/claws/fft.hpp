#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <fftw3.h>

#include "errors.hpp"
#include "kernels.hpp"

namespace claws {

namespace detail {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct FftwPlanDestroy {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};

using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDestroy>;

} // namespace detail

/**
 * Circular convolution with a fixed kernel on N periodic cells, via real FFTs.
 *
 * Offsets that alias modulo N are folded together, so the result matches the direct
 * periodic sum exactly in exact arithmetic. Plans use FFTW_ESTIMATE so repeated runs are
 * bit-identical.
 */
class PeriodicConvolver {
public:
    PeriodicConvolver(std::size_t n, const DiscreteWeights& weights)
        : n_(n), spectrum_size_(n / 2 + 1)
    {
        if (n < 2) throw ConfigError("periodic convolution needs at least 2 cells");
        real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * n_)));
        freq_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * spectrum_size_)));
        const int ni = static_cast<int>(n_);
        forward_.reset(fftw_plan_dft_r2c_1d(ni, real_.get(), freq_.get(), FFTW_ESTIMATE));
        backward_.reset(fftw_plan_dft_c2r_1d(ni, freq_.get(), real_.get(), FFTW_ESTIMATE));
        if (!forward_ || !backward_) throw SolverError("FFTW planning failed");

        double* h = real_.get();
        for (std::size_t k = 0; k < n_; ++k) h[k] = 0.0;
        const auto nn = static_cast<std::ptrdiff_t>(n_);
        for (std::size_t j = 0; j < weights.size(); ++j) {
            auto k = weights.offset(j) % nn;
            if (k < 0) k += nn;
            h[k] += weights.weights()[j] * weights.dx();
        }
        fftw_execute(forward_.get());
        kernel_hat_.resize(spectrum_size_);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t k = 0; k < spectrum_size_; ++k)
            kernel_hat_[k] = std::complex<double>(freq_.get()[k][0], freq_.get()[k][1]) * inv_n;
    }

    std::size_t size() const noexcept { return n_; }

    /// out_i = sum_k h_k in_{i-k}; `in` and `out` may alias.
    void apply(std::span<const double> in, std::span<double> out) const
    {
        double* r = real_.get();
        for (std::size_t i = 0; i < n_; ++i) r[i] = in[i];
        fftw_execute(forward_.get());
        fftw_complex* f = freq_.get();
        for (std::size_t k = 0; k < spectrum_size_; ++k) {
            const std::complex<double> v =
                std::complex<double>(f[k][0], f[k][1]) * kernel_hat_[k];
            f[k][0] = v.real();
            f[k][1] = v.imag();
        }
        fftw_execute(backward_.get());
        for (std::size_t i = 0; i < n_; ++i) out[i] = r[i];
    }

private:
    std::size_t n_;
    std::size_t spectrum_size_;
    std::unique_ptr<double, detail::FftwFree> real_;
    std::unique_ptr<fftw_complex, detail::FftwFree> freq_;
    detail::FftwPlan forward_;
    detail::FftwPlan backward_;
    std::vector<std::complex<double>> kernel_hat_;
};

} // namespace claws
