#ifndef WCHAOS_ORACLES_HPP
#define WCHAOS_ORACLES_HPP

#include <cstdint>

#include "wchaos/cm_basis.hpp"
#include "wchaos/chaos_space.hpp"
#include "wchaos/multiindex.hpp"

namespace wchaos {

struct McConfig {
    std::uint64_t paths = 100000;
    int steps = 1000;
    std::uint64_t seed = 12345;
};

struct McEstimate {
    double mean = 0.0;
    double mean_se = 0.0;
    double second_moment = 0.0;
    double second_moment_se = 0.0;
};

// Closed-form chaos coefficient of the example equation's Fourier mode:
//   u_alpha(t, y) = e^{-y^2/2} e^{-y^2 t} prod_k (-y^2 M_k(t))^{alpha_k} / sqrt(alpha!),
// with M_k the cosine antiderivative.  Derived from the geometric Brownian
// motion solution; validated against mc_moments before use as ground truth.
double gbm_coeff(const MultiIndex& alpha, double t, double y, const TimeInterval& interval);

// E u_hat(t, y) of the mode SDE du = -y^2 u dt - y^2 u dW, u(0) = e^{-y^2/2}.
double mean_exact(double t, double y);

// E |u_hat(t, y)|^2 = e^{-y^2} e^{(-2 y^2 + y^4) t} from the second-moment ODE.
double second_moment_exact(double t, double y);

struct GrowthValue {
    double value = 0.0;           // t^n / n! * int y^{4n} |heat-evolved spectrum|^2 dy
    double stirling_ratio = 0.0;  // value / [ (2 sqrt(t) / (1 + 2t))^{2n} n! ]
};

// Level-norm law of the example equation by adaptive quadrature; requires
// n <= 12 (integrand handled in log scale).
GrowthValue growth_oracle(int n, double t);

// Path simulation of the exact mode solution: sample mean and second moment
// of u_hat(t, y) with standard errors.
McEstimate mc_moments(double t, double y, const McConfig& cfg);

struct McValue {
    double value = 0.0;
    double se = 0.0;
};

// Monte Carlo S-transform E(u_hat(t,y) E_h(t)) with the discrete stochastic
// exponential built on the same path grid.
McValue mc_s_transform(const HFunction& h, double t, double y, double T, const McConfig& cfg);

}  // namespace wchaos

#endif
