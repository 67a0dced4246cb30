#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"

using namespace wchaos;

TEST_CASE("closed-form mode coefficient basics") {
    const TimeInterval interval{1.0, 100};
    // alpha = 0: plain mean decay.
    CHECK(gbm_coeff(MultiIndex::zero(), 0.4, 1.5, interval) ==
          doctest::Approx(std::exp(-0.5 * 2.25) * std::exp(-2.25 * 0.4)));
    // y = 0: frozen at the initial value, higher levels empty.
    CHECK(gbm_coeff(MultiIndex::zero(), 0.7, 0.0, interval) == doctest::Approx(1.0));
    CHECK(gbm_coeff(MultiIndex::unit(1), 0.7, 0.0, interval) == doctest::Approx(0.0));
    // k >= 2 antiderivatives vanish at the final time.
    CHECK(gbm_coeff(MultiIndex::unit(2), interval.T, 1.0, interval) ==
          doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(gbm_coeff(MultiIndex::unit(1), interval.T, 1.0, interval)) > 1e-3);
    // level-one coefficient in closed form: -y^2 M_1(t) * mean.
    const double y = 1.2, t = 0.3;
    CHECK(gbm_coeff(MultiIndex::unit(1), t, y, interval) ==
          doctest::Approx(-y * y * cosine_antiderivative(1, t, interval.T) *
                          mean_exact(t, y)));
}

TEST_CASE("moment formulas") {
    CHECK(mean_exact(0.0, 2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(mean_exact(0.5, 1.0) == doctest::Approx(std::exp(-0.5 - 0.5)));
    CHECK(second_moment_exact(0.0, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(second_moment_exact(0.5, 2.0) ==
          doctest::Approx(std::exp(-4.0) * std::exp((-8.0 + 16.0) * 0.5)));
    // Jensen: E u^2 >= (E u)^2, strictly for t > 0.
    CHECK(second_moment_exact(0.5, 1.0) > mean_exact(0.5, 1.0) * mean_exact(0.5, 1.0));
}

TEST_CASE("chaos coefficients resum to the second moment") {
    const TimeInterval interval{0.5, 100};
    const double y = 1.0, t = 0.5;
    double sum = 0.0;
    for (const auto& alpha : enumerate(14, 1))
        sum += std::pow(gbm_coeff(alpha, t, y, interval), 2.0);
    // At t = T only the first basis element contributes, so K = 1 is exact
    // and the level series converges fast.
    CHECK(sum == doctest::Approx(second_moment_exact(t, y)).epsilon(1e-10));
}

TEST_CASE("growth oracle level zero and one") {
    for (double t : {0.25, 1.0}) {
        // n = 0: int e^{-(1+2t) y^2} dy.
        CHECK(growth_oracle(0, t).value ==
              doctest::Approx(std::sqrt(std::numbers::pi / (1.0 + 2.0 * t))).epsilon(1e-10));
        // n = 1: t * int y^4 e^{-(1+2t) y^2} dy = t * (3/4) sqrt(pi) s^{-5/2}.
        const double s = 1.0 + 2.0 * t;
        CHECK(growth_oracle(1, t).value ==
              doctest::Approx(t * 0.75 * std::sqrt(std::numbers::pi) * std::pow(s, -2.5))
                  .epsilon(1e-8));
    }
}

TEST_CASE("growth oracle against a brute-force Riemann sum") {
    const int n = 3;
    const double t = 0.7;
    const double dy = 1e-4;
    double acc = 0.0;
    for (int j = 1; j < 300000; ++j) {
        const double y = j * dy;
        acc += std::pow(y, 4.0 * n) * std::exp(-(1.0 + 2.0 * t) * y * y);
    }
    acc = 2.0 * acc * dy;  // even integrand; endpoints negligible
    const double expect = std::pow(t, n) / 6.0 * acc;
    CHECK(growth_oracle(n, t).value == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("normalized growth ratios stay bounded") {
    for (double t : {0.5, 1.0}) {
        double lo = 1e300, hi = 0.0;
        for (int n = 1; n <= 8; ++n) {
            const double r = growth_oracle(n, t).stirling_ratio;
            CHECK(r > 0.0);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo <= 10.0);
    }
}

TEST_CASE("monte carlo moments: exact cases and determinism") {
    const McConfig cfg{2000, 50, 99};
    // y = 0 freezes the path at 1.
    const auto frozen = mc_moments(0.5, 0.0, cfg);
    CHECK(frozen.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frozen.second_moment == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frozen.mean_se == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

    const auto a = mc_moments(0.5, 1.0, cfg);
    const auto b = mc_moments(0.5, 1.0, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.second_moment == b.second_moment);
    const auto c = mc_moments(0.5, 1.0, {2000, 50, 100});
    CHECK(a.mean != c.mean);
}

TEST_CASE("monte carlo moments agree with the closed forms") {
    const double t = 0.5, y = 1.0;
    const auto est = mc_moments(t, y, {50000, 400, 4242});
    CHECK(est.mean_se > 0.0);
    CHECK(std::abs(est.mean - mean_exact(t, y)) <= 4.0 * est.mean_se + 1e-4);
    CHECK(std::abs(est.second_moment - second_moment_exact(t, y)) <=
          4.0 * est.second_moment_se + 1e-3);
}

TEST_CASE("monte carlo s-transform") {
    const double T = 1.0;
    // h = 0 reduces to the plain mean.
    const auto plain = mc_s_transform(HFunction{{}}, 0.5, 1.0, T, {5000, 100, 7});
    CHECK(plain.value == doctest::Approx(mc_moments(0.5, 1.0, {5000, 100, 7}).mean)
                             .epsilon(1e-10));

    // y = 0: u is constant 1, so the transform is E E_h(t) which is 1 up to
    // discretization of the exponential.
    const auto unit = mc_s_transform(HFunction{{0.4}}, 0.5, 0.0, T, {20000, 200, 11});
    CHECK(std::abs(unit.value - 1.0) <= 4.0 * unit.se + 1e-3);

    // Chaos-side comparison at the final time, where a short expansion in
    // the first basis element is exact in the mode count.
    const double t = 0.5, y = 1.0;
    const TimeInterval interval{t, 500};
    const auto series = fourier_mode_solve(y, 10, 2, interval);
    ChaosSeries<double> finals(10, 2);
    for (const auto& [alpha, traj] : series.coefficients()) finals.set(alpha, traj.back());
    const HFunction h{{0.3}};
    const double via_series = s_evaluate(finals, h);
    const auto mc = mc_s_transform(h, t, y, t, {200000, 500, 31});
    CHECK(std::abs(mc.value - via_series) <= 4.0 * mc.se + 2e-3);
}
