#include "wchaos/cm_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wchaos {

double HFunction::eval(double t, double T) const {
    double v = 0.0;
    for (int k = 1; k <= K(); ++k) v += coeffs[k - 1] * cosine(k, t, T);
    return v;
}

double cosine(int k, double t, double T) {
    if (k < 1) throw std::domain_error("cosine: basis index must be >= 1");
    if (t < 0.0 || t > T) throw std::domain_error("cosine: t outside [0, T]");
    if (k == 1) return 1.0 / std::sqrt(T);
    return std::sqrt(2.0 / T) * std::cos(std::numbers::pi * (k - 1) * t / T);
}

double cosine_antiderivative(int k, double t, double T) {
    if (k < 1) throw std::domain_error("cosine_antiderivative: basis index must be >= 1");
    if (t < 0.0 || t > T) throw std::domain_error("cosine_antiderivative: t outside [0, T]");
    if (k == 1) return t / std::sqrt(T);
    const double w = std::numbers::pi * (k - 1) / T;
    return std::sqrt(2.0 / T) * std::sin(w * t) / w;
}

double hermite(int n, double x) {
    if (n <= 0) return 1.0;
    double hm1 = 1.0, h = x;
    for (int m = 1; m < n; ++m) {
        const double hp1 = x * h - m * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

double xi_eval(const MultiIndex& alpha, std::span<const double> zeta) {
    if (alpha.max_support() > zeta.size())
        throw std::domain_error("xi_eval: zeta shorter than the support of alpha");
    double v = 1.0;
    for (const auto& [k, m] : alpha.entries())
        v *= hermite(static_cast<int>(m), zeta[k - 1]);
    return v * std::exp(-0.5 * log_factorial(alpha));
}

HFunction project(const std::function<double(double)>& h, int K, const TimeInterval& interval) {
    HFunction out;
    out.coeffs.assign(static_cast<std::size_t>(K), 0.0);
    const double dt = interval.dt();
    for (int k = 1; k <= K; ++k) {
        double acc = 0.5 * (h(0.0) * cosine(k, 0.0, interval.T) +
                            h(interval.T) * cosine(k, interval.T, interval.T));
        for (int j = 1; j < interval.n_t; ++j) {
            const double t = interval.time(j);
            acc += h(t) * cosine(k, t, interval.T);
        }
        out.coeffs[static_cast<std::size_t>(k - 1)] = acc * dt;
    }
    return out;
}

std::vector<double> zeta_from_increments(std::span<const double> dW, int K,
                                         const TimeInterval& interval) {
    const double dt = interval.T / static_cast<double>(dW.size());
    std::vector<double> zeta(static_cast<std::size_t>(K), 0.0);
    for (int k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dW.size(); ++j) {
            const double tm = (static_cast<double>(j) + 0.5) * dt;
            acc += cosine(k, tm, interval.T) * dW[j];
        }
        zeta[static_cast<std::size_t>(k - 1)] = acc;
    }
    return zeta;
}

}  // namespace wchaos
