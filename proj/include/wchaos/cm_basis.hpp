#ifndef WCHAOS_CM_BASIS_HPP
#define WCHAOS_CM_BASIS_HPP

#include <functional>
#include <span>
#include <vector>

#include "wchaos/multiindex.hpp"

namespace wchaos {

// Time horizon (0, T) with a uniform grid of n_t steps (n_t + 1 points).
struct TimeInterval {
    double T = 1.0;
    int n_t = 1000;

    double dt() const { return T / n_t; }
    double time(int j) const { return T * j / n_t; }
};

// Test direction h represented by its cosine-basis coefficients h_1..h_K.
struct HFunction {
    std::vector<double> coeffs;

    int K() const { return static_cast<int>(coeffs.size()); }
    double coeff(int k) const {  // 1-based, zero outside the stored range
        return (k >= 1 && k <= K()) ? coeffs[k - 1] : 0.0;
    }
    // Pointwise value h(t) = sum_k h_k m_k(t).
    double eval(double t, double T) const;
};

// Fourier cosine basis on (0,T): m_1 = 1/sqrt(T), m_k = sqrt(2/T) cos(pi (k-1) t / T).
double cosine(int k, double t, double T);

// M_k(t) = int_0^t m_k(s) ds in closed form.
double cosine_antiderivative(int k, double t, double T);

// Probabilists' Hermite polynomial H_n via the three-term recurrence.
double hermite(int n, double x);

// xi_alpha = (alpha!)^{-1/2} prod_k H_{alpha_k}(zeta_k) for given Gaussian
// coordinates zeta_k = int_0^T m_k dW.
double xi_eval(const MultiIndex& alpha, std::span<const double> zeta);

// Projection h_k = int_0^T h(t) m_k(t) dt, k = 1..K, composite trapezoid on
// the interval's time grid.
HFunction project(const std::function<double(double)>& h, int K, const TimeInterval& interval);

// zeta_k = sum_j m_k(t_mid_j) dW_j for a Brownian increment path; the
// quadrature counterpart of the i.i.d. Gaussian sampling of zeta.
std::vector<double> zeta_from_increments(std::span<const double> dW, int K,
                                         const TimeInterval& interval);

}  // namespace wchaos

#endif
