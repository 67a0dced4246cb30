#include "wchaos/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace wchaos {

RealFFT::RealFFT(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealFFT: size must be >= 2");
    real_buf_.assign(static_cast<std::size_t>(n), 0.0);
    cplx_buf_.assign(static_cast<std::size_t>(n / 2 + 1), {});
    plan_fwd_ = fftw_plan_dft_r2c_1d(
        n, real_buf_.data(), reinterpret_cast<fftw_complex*>(cplx_buf_.data()), FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(
        n, reinterpret_cast<fftw_complex*>(cplx_buf_.data()), real_buf_.data(), FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("RealFFT: fftw plan creation failed");
}

RealFFT::~RealFFT() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void RealFFT::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != modes())
        throw std::invalid_argument("RealFFT::forward: size mismatch");
    std::memcpy(real_buf_.data(), in.data(), sizeof(double) * in.size());
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out.data(), cplx_buf_.data(), sizeof(std::complex<double>) * out.size());
}

void RealFFT::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (static_cast<int>(in.size()) != modes() || static_cast<int>(out.size()) != n_)
        throw std::invalid_argument("RealFFT::inverse: size mismatch");
    std::memcpy(cplx_buf_.data(), in.data(), sizeof(std::complex<double>) * in.size());
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = real_buf_[static_cast<std::size_t>(i)] * scale;
}

}  // namespace wchaos
