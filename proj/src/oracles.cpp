#include "wchaos/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wchaos/parabolic1d.hpp"
#include "wchaos/rng.hpp"

namespace wchaos {

double gbm_coeff(const MultiIndex& alpha, double t, double y, const TimeInterval& interval) {
    if (t < 0.0 || t > interval.T) throw std::domain_error("gbm_coeff: t outside [0, T]");
    double v = std::exp(-0.5 * y * y - y * y * t - 0.5 * log_factorial(alpha));
    for (const auto& [k, m] : alpha.entries()) {
        const double factor = -y * y * cosine_antiderivative(static_cast<int>(k), t, interval.T);
        for (std::uint32_t i = 0; i < m; ++i) v *= factor;
    }
    return v;
}

double mean_exact(double t, double y) {
    return std::exp(-0.5 * y * y - y * y * t);
}

double second_moment_exact(double t, double y) {
    // d E|u|^2 / dt = (-2 y^2 + y^4) E|u|^2, E|u(0)|^2 = e^{-y^2}.
    return std::exp(-y * y + (-2.0 * y * y + y * y * y * y) * t);
}

namespace {

double growth_integrand(double y, int n, double c) {
    if (y <= 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(4.0 * n * std::log(y) - c * y * y);
}

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(int n, double c, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = growth_integrand(lm, n, c), frm = growth_integrand(rm, n, c);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    if (depth > 40) throw NumericalError("growth_oracle: quadrature did not converge");
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(n, c, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(n, c, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

GrowthValue growth_oracle(int n, double t) {
    if (n < 0 || n > 12) throw std::domain_error("growth_oracle: requires 0 <= n <= 12");
    if (t <= 0.0) throw std::domain_error("growth_oracle: requires t > 0");
    const double c = 1.0 + 2.0 * t;
    // Peak of y^{4n} e^{-c y^2} and a cutoff 60 e-folds below it.
    const double ystar = n > 0 ? std::sqrt(2.0 * n / c) : 0.0;
    double ymax = ystar + 1.0;
    const double logpeak = n > 0 ? 4.0 * n * std::log(ystar) - c * ystar * ystar : 0.0;
    while (4.0 * n * std::log(ymax) - c * ymax * ymax > logpeak - 60.0) ymax *= 1.5;

    const double fa = growth_integrand(0.0, n, c);
    const double fb = growth_integrand(ymax, n, c);
    const double fm = growth_integrand(0.5 * ymax, n, c);
    const double whole = simpson(fa, fm, fb, 0.0, ymax);
    const double scale = std::exp(logpeak);
    const double half = adaptive_simpson(n, c, 0.0, ymax, fa, fm, fb, whole,
                                         1e-13 * scale * std::max(1.0, ymax), 0);
    const double integral = 2.0 * half;  // even integrand over the full line

    GrowthValue out;
    const double log_tn = n * std::log(t) - std::lgamma(n + 1.0);
    out.value = std::exp(log_tn) * integral;
    // Stirling normalization under this Fourier convention: the level norms
    // behave like (2 sqrt(t) / (1 + 2t))^{2n} n! times a bounded factor.
    const double log_norm = n * std::log(4.0 * t / (c * c)) + std::lgamma(n + 1.0);
    out.stirling_ratio = out.value / std::exp(log_norm);
    return out;
}

McEstimate mc_moments(double t, double y, const McConfig& cfg) {
    if (cfg.paths < 1 || cfg.steps < 2) throw std::domain_error("mc_moments: bad configuration");
    const double dt = t / cfg.steps;
    const double sdt = std::sqrt(dt);
    const double drift = (-y * y - 0.5 * y * y * y * y) * t;
    const double u0 = std::exp(-0.5 * y * y);

    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    const std::uint64_t block_size = 4096;
    std::uint64_t done = 0, block = 0;
    while (done < cfg.paths) {
        const std::uint64_t m = std::min(block_size, cfg.paths - done);
        auto rng = GaussianRng::for_block(cfg.seed, block++);
        for (std::uint64_t p = 0; p < m; ++p) {
            double w = 0.0;
            for (int j = 0; j < cfg.steps; ++j) w += sdt * rng.normal();
            const double u = u0 * std::exp(drift - y * y * w);
            s1 += u;
            s2 += u * u;
            s4 += u * u * u * u;
        }
        done += m;
    }
    const double inv = 1.0 / static_cast<double>(cfg.paths);
    McEstimate est;
    est.mean = s1 * inv;
    est.second_moment = s2 * inv;
    const double var1 = std::max(0.0, s2 * inv - est.mean * est.mean);
    const double var2 = std::max(0.0, s4 * inv - est.second_moment * est.second_moment);
    est.mean_se = std::sqrt(var1 * inv);
    est.second_moment_se = std::sqrt(var2 * inv);
    return est;
}

McValue mc_s_transform(const HFunction& h, double t, double y, double T, const McConfig& cfg) {
    if (t > T) throw std::domain_error("mc_s_transform: t beyond the horizon");
    const double dt = t / cfg.steps;
    const double sdt = std::sqrt(dt);
    const double drift = (-y * y - 0.5 * y * y * y * y) * t;
    const double u0 = std::exp(-0.5 * y * y);

    std::vector<double> hmid(static_cast<std::size_t>(cfg.steps));
    double h2int = 0.0;
    for (int j = 0; j < cfg.steps; ++j) {
        const double hv = h.eval((j + 0.5) * dt, T);
        hmid[static_cast<std::size_t>(j)] = hv;
        h2int += hv * hv * dt;
    }

    double s1 = 0.0, s2 = 0.0;
    const std::uint64_t block_size = 4096;
    std::uint64_t done = 0, block = 0;
    while (done < cfg.paths) {
        const std::uint64_t m = std::min(block_size, cfg.paths - done);
        auto rng = GaussianRng::for_block(cfg.seed, block++);
        for (std::uint64_t p = 0; p < m; ++p) {
            double w = 0.0, hdw = 0.0;
            for (int j = 0; j < cfg.steps; ++j) {
                const double dW = sdt * rng.normal();
                w += dW;
                hdw += hmid[static_cast<std::size_t>(j)] * dW;
            }
            const double v = u0 * std::exp(drift - y * y * w) * std::exp(hdw - 0.5 * h2int);
            s1 += v;
            s2 += v * v;
        }
        done += m;
    }
    const double inv = 1.0 / static_cast<double>(cfg.paths);
    McValue out;
    out.value = s1 * inv;
    out.se = std::sqrt(std::max(0.0, s2 * inv - out.value * out.value) * inv);
    return out;
}

}  // namespace wchaos
