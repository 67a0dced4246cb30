#ifndef WCHAOS_FFT_HPP
#define WCHAOS_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace wchaos {

// Real-to-complex FFT of fixed size n (FFTW, half-spectrum of n/2+1 modes).
// inverse() includes the 1/n normalization.
class RealFFT {
public:
    explicit RealFFT(int n);
    ~RealFFT();

    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;

    int size() const { return n_; }
    int modes() const { return n_ / 2 + 1; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    int n_;
    void* plan_fwd_;
    void* plan_inv_;
    std::vector<double> real_buf_;
    std::vector<std::complex<double>> cplx_buf_;
};

}  // namespace wchaos

#endif
