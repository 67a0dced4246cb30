#include <cmath>
#include <vector>

#include "doctest.h"
#include "wchaos/chaos_space.hpp"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"

using namespace wchaos;

namespace {

double vec_norm_sq(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

std::function<double(const std::vector<double>&)> vec_norm_fn() {
    return [](const std::vector<double>& v) { return vec_norm_sq(v); };
}

}  // namespace

TEST_CASE("series truncation is enforced") {
    ChaosSeries<double> s(2, 3);
    s.set(MultiIndex::zero(), 1.0);
    s.set(MultiIndex::from_characteristic_set({3, 3}), 2.0);
    CHECK_THROWS_AS(s.set(MultiIndex::from_characteristic_set({1, 1, 1}), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(s.set(MultiIndex::unit(4), 0.0), std::invalid_argument);
    CHECK(s.contains(MultiIndex::zero()));
    CHECK_FALSE(s.contains(MultiIndex::unit(1)));
    CHECK_THROWS_AS(s.at(MultiIndex::unit(1)), std::out_of_range);
    CHECK(s.size() == 2);
}

TEST_CASE("weighted norm single-term cases") {
    const std::vector<double> f{1.0, 2.0, -1.0};
    const double f2 = vec_norm_sq(f);

    ChaosSeries<std::vector<double>> s0(3, 5);
    s0.set(MultiIndex::zero(), f);
    for (auto [p, q] : {std::pair{0.0, 0.0}, {2.0, -1.0}, {-3.0, 1.5}})
        CHECK(weighted_norm_sq(s0, {p, q}, vec_norm_fn()) == doctest::Approx(f2));

    for (std::uint32_t k : {1u, 2u, 4u}) {
        ChaosSeries<std::vector<double>> s1(3, 5);
        s1.set(MultiIndex::unit(k), f);
        const double p = 1.2, q = -0.7;
        CHECK(weighted_norm_sq(s1, {p, q}, vec_norm_fn()) ==
              doctest::Approx(std::pow(2.0, p) * std::pow(double(k), 2.0 * q) * f2));
    }

    ChaosSeries<std::vector<double>> s2(3, 5);
    s2.set(MultiIndex::zero(), f);
    s2.set(MultiIndex::unit(1), f);
    CHECK(weighted_norm_sq(s2, {0.0, 0.0}, vec_norm_fn()) == doctest::Approx(2.0 * f2));
}

TEST_CASE("weighted norm monotone in p and q") {
    ChaosSeries<double> s(3, 4);
    s.set(MultiIndex::zero(), 1.0);
    s.set(MultiIndex::unit(2), 0.5);
    s.set(MultiIndex::from_characteristic_set({3, 4}), -0.2);
    std::function<double(const double&)> nrm = [](const double& v) { return v * v; };
    const double base = weighted_norm_sq(s, {0.0, 0.0}, nrm);
    CHECK(weighted_norm_sq(s, {1.0, 0.0}, nrm) >= base);
    CHECK(weighted_norm_sq(s, {0.0, 1.0}, nrm) >= base);
    CHECK(weighted_norm_sq(s, {-1.0, 0.0}, nrm) <= base);
}

TEST_CASE("expectation norm") {
    const std::vector<double> f{0.5, -0.5};
    ChaosSeries<std::vector<double>> s(1, 2);
    s.set(MultiIndex::zero(), f);
    CHECK(expectation_norm_sq(s, vec_norm_fn()) == doctest::Approx(vec_norm_sq(f)));
    s.set(MultiIndex::unit(2), f);
    // On |alpha| <= 1 the 1/|alpha|! weight is 1, so the two norms agree.
    CHECK(expectation_norm_sq(s, vec_norm_fn()) ==
          doctest::Approx(weighted_norm_sq(s, {0.0, 0.0}, vec_norm_fn())));
}

TEST_CASE("truncated mode series reaches the closed-form second moment") {
    const double t = 0.5, y = 1.0;
    const TimeInterval interval{t, 1000};
    const auto series = fourier_mode_solve(y, 12, 4, interval);
    double sum = 0.0;
    for (const auto& [alpha, traj] : series.coefficients()) sum += traj.back() * traj.back();
    CHECK(sum == doctest::Approx(second_moment_exact(t, y)).epsilon(1e-3));
}

TEST_CASE("s_evaluate basics") {
    ChaosSeries<double> s(2, 3);
    s.set(MultiIndex::zero(), 2.0);
    HFunction h{{0.4, -0.3, 0.1}};
    CHECK(s_evaluate(s, h) == doctest::Approx(2.0));

    s.set(MultiIndex::unit(3), 5.0);
    HFunction only3{{0.0, 0.0, 0.25}};
    CHECK(s_evaluate(s, only3) == doctest::Approx(2.0 + 0.25 * 5.0));
}

TEST_CASE("s_evaluate recovers coefficients by finite differences") {
    ChaosSeries<double> s(2, 2);
    s.set(MultiIndex::zero(), 1.1);
    s.set(MultiIndex::unit(1), -0.7);
    s.set(MultiIndex::unit(2), 0.4);
    s.set(MultiIndex::from_characteristic_set({1, 1}), 0.9);
    s.set(MultiIndex::from_characteristic_set({1, 2}), -0.3);
    s.set(MultiIndex::from_characteristic_set({2, 2}), 0.6);

    auto eval = [&](double h1, double h2) { return s_evaluate(s, HFunction{{h1, h2}}); };
    const double e = 1e-3;
    // first derivatives at h = 0 -> u_{eps_k}
    CHECK((eval(e, 0) - eval(-e, 0)) / (2 * e) == doctest::Approx(-0.7).epsilon(1e-4));
    CHECK((eval(0, e) - eval(0, -e)) / (2 * e) == doctest::Approx(0.4).epsilon(1e-4));
    // second derivatives -> u_alpha / sqrt(alpha!)
    CHECK((eval(e, 0) - 2 * eval(0, 0) + eval(-e, 0)) / (e * e) ==
          doctest::Approx(2.0 * 0.9 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK((eval(e, e) - eval(e, -e) - eval(-e, e) + eval(-e, -e)) / (4 * e * e) ==
          doctest::Approx(-0.3).epsilon(1e-4));
}

TEST_CASE("s_evaluate on vector coefficients") {
    ChaosSeries<std::vector<double>> s(1, 1);
    s.set(MultiIndex::zero(), {1.0, 0.0});
    s.set(MultiIndex::unit(1), {0.0, 2.0});
    const auto v = s_evaluate(s, HFunction{{0.5}});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(1.0));
}

TEST_CASE("hnorm and membership of the stochastic exponential") {
    CHECK(hnorm_sq(HFunction{{1.0}}, -2.7) == doctest::Approx(1.0));
    CHECK(hnorm_sq(HFunction{{0.0, 1.0}}, -1.0) == doctest::Approx(0.25));
    const double c = 1.7;
    CHECK(hnorm_sq(HFunction{{0.0, 0.0, c}}, 0.5) == doctest::Approx(c * c * 3.0));

    CHECK(eh_member(HFunction{{}}, {0.0, 0.0}));
    CHECK(eh_member(HFunction{{}}, {-5.0, 3.0}));
    CHECK_FALSE(eh_member(HFunction{{1.0}}, {0.0, 0.0}));  // boundary is excluded
    CHECK(eh_member(HFunction{{0.5}}, {0.0, 0.0}));
    // true stays true when p grows
    CHECK(eh_member(HFunction{{1.0}}, {0.1, 0.0}));
}
