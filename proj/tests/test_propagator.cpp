#include <cmath>
#include <vector>

#include "doctest.h"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"

using namespace wchaos;

namespace {

PropagatorConfig small_config(GridMode mode) {
    PropagatorConfig cfg;
    cfg.N = 3;
    cfg.K = 3;
    cfg.grid = {6.0, mode == GridMode::PeriodicSpectral ? 64 : 63, mode};
    cfg.interval = {0.5, 50};
    cfg.coeffs = CoefficientSet::heat_example();
    cfg.data.v = [](double x) { return std::exp(-0.5 * x * x); };
    return cfg;
}

double max_abs(const SpatialField& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double max_field_diff(const SpatialField& a, const SpatialField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("zero diffusion operator keeps everything at level zero") {
    for (auto mode : {GridMode::PeriodicSpectral, GridMode::BoundedFiniteDifference}) {
        auto cfg = small_config(mode);
        cfg.coeffs = CoefficientSet{};  // a = 1, B = 0
        SolveOptions opts;
        opts.store_times = {cfg.interval.T};
        const auto res = solve_system(cfg, opts);

        const auto ref = solve_h(sample_field(cfg.data.v, cfg.grid), {}, {}, HFunction{{}},
                                 cfg.coeffs, cfg.interval, cfg.grid);
        CHECK(max_field_diff(res.series.at(MultiIndex::zero()).final(), ref.final()) <= 1e-14);
        for (const auto& [alpha, traj] : res.series.coefficients())
            if (alpha.order() > 0)
                for (const auto& f : traj.fields) CHECK(max_abs(f) == 0.0);
    }
}

TEST_CASE("higher-level data never feeds back into lower levels") {
    auto cfg = small_config(GridMode::BoundedFiniteDifference);
    cfg.coeffs.rho = Coefficient(0.5);
    cfg.coeffs.sigma = Coefficient(0.1);
    cfg.coeffs.nu = Coefficient(0.2);

    ChaosData base;
    base.terms[MultiIndex::zero()].v = cfg.data.v;
    ChaosData extended = base;
    extended.terms[MultiIndex::from_characteristic_set({1, 1})].v = [](double x) {
        return 0.7 * std::exp(-x * x);
    };

    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    const auto a = solve_system_chaos(cfg, base, opts);
    const auto b = solve_system_chaos(cfg, extended, opts);
    for (const auto& [alpha, traj] : a.series.coefficients()) {
        if (alpha.order() >= 2) continue;
        const auto& other = b.series.at(alpha);
        for (std::size_t j = 0; j < traj.fields.size(); ++j)
            CHECK(max_field_diff(traj.fields[j], other.fields[j]) == 0.0);
    }
}

TEST_CASE("fourier mode at zero frequency is the constant one") {
    const auto series = fourier_mode_solve(0.0, 3, 3, {1.0, 50});
    for (const auto& [alpha, traj] : series.coefficients()) {
        const double expect = alpha.is_zero() ? 1.0 : 0.0;
        for (double v : traj) CHECK(v == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("fourier mode mean trajectory") {
    const TimeInterval interval{1.0, 1000};
    const auto series = fourier_mode_solve(1.0, 2, 2, interval);
    const auto& traj = series.at(MultiIndex::zero());
    REQUIRE(traj.size() == static_cast<std::size_t>(interval.n_t) + 1);
    for (int j = 0; j <= interval.n_t; j += 100) {
        const double t = j * interval.dt();
        CHECK(traj[static_cast<std::size_t>(j)] ==
              doctest::Approx(mean_exact(t, 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("fourier mode coefficients match the closed form") {
    const double y = 1.0;
    const TimeInterval interval{1.0, 1000};
    const auto series = fourier_mode_solve(y, 4, 4, interval);
    const int j = 300;  // t = 0.3
    const double t = j * interval.dt();
    for (const auto& alpha :
         {MultiIndex::unit(1), MultiIndex::unit(2), MultiIndex::from_characteristic_set({1, 1}),
          MultiIndex::from_characteristic_set({1, 2}),
          MultiIndex::from_characteristic_set({2, 3, 4})}) {
        const double got = series.at(alpha)[static_cast<std::size_t>(j)];
        const double expect = gbm_coeff(alpha, t, y, interval);
        CHECK(got == doctest::Approx(expect).epsilon(1e-4).scale(0.01));
    }
    // At the final time the k >= 2 antiderivatives vanish, so those
    // coefficients return to (near) zero.
    CHECK(std::abs(series.at(MultiIndex::unit(2)).back()) <= 1e-4);
    CHECK(std::abs(series.at(MultiIndex::unit(1)).back()) > 1e-3);
}

TEST_CASE("level norm table is consistent with the stored fields") {
    auto cfg = small_config(GridMode::PeriodicSpectral);
    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    opts.norm_times = {cfg.interval.T};
    const auto res = solve_system(cfg, opts);

    REQUIRE(res.norms.times.size() == 1);
    REQUIRE(res.norms.level_norm_sq.size() == 1);
    REQUIRE(res.norms.level_norm_sq[0].size() == static_cast<std::size_t>(cfg.N) + 1);
    for (int n = 0; n <= cfg.N; ++n) {
        double direct = 0.0;
        for (const auto& [alpha, traj] : res.series.coefficients())
            if (static_cast<int>(alpha.order()) == n)
                direct += field_norm_sq(traj.at_time(cfg.interval.T), cfg.grid,
                                        SpatialNormKind::L2);
        CHECK(res.norms.level_norm_sq[0][static_cast<std::size_t>(n)] ==
              doctest::Approx(direct).epsilon(1e-12));
        CHECK(level_norm_sq(res.series, n, cfg.interval.T, cfg.grid, SpatialNormKind::L2) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("norm-only solves match field-storing solves") {
    auto cfg = small_config(GridMode::PeriodicSpectral);
    SolveOptions with_fields, norms_only;
    with_fields.store_times = {cfg.interval.T};
    with_fields.norm_times = {cfg.interval.T};
    norms_only.store_fields = false;
    norms_only.norm_times = {cfg.interval.T};
    const auto a = solve_system(cfg, with_fields);
    const auto b = solve_system(cfg, norms_only);
    for (std::size_t n = 0; n < a.norms.level_norm_sq[0].size(); ++n)
        CHECK(b.norms.level_norm_sq[0][n] ==
              doctest::Approx(a.norms.level_norm_sq[0][n]).epsilon(1e-12));
}

TEST_CASE("shift solve with data at zero reproduces the direct solve") {
    auto cfg = small_config(GridMode::BoundedFiniteDifference);
    cfg.coeffs.sigma = Coefficient(0.2);
    ChaosData data;
    data.terms[MultiIndex::zero()] = cfg.data;
    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    const auto direct = solve_system(cfg, opts);
    const auto shifted = shift_solve(cfg, data, opts);
    for (const auto& [alpha, traj] : direct.series.coefficients()) {
        REQUIRE(shifted.series.contains(alpha));
        for (std::size_t j = 0; j < traj.fields.size(); ++j)
            CHECK(max_field_diff(traj.fields[j], shifted.series.at(alpha).fields[j]) <= 1e-15);
    }
}

TEST_CASE("shift solve re-indexes by the data index") {
    auto cfg = small_config(GridMode::BoundedFiniteDifference);
    ChaosData data;
    data.terms[MultiIndex::unit(1)].v = cfg.data.v;
    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    const auto res = shift_solve(cfg, data, opts);

    // Below the data index everything vanishes.
    if (res.series.contains(MultiIndex::zero()))
        for (const auto& f : res.series.at(MultiIndex::zero()).fields) CHECK(max_abs(f) == 0.0);

    // At alpha = eps_1 the coefficient is the plain drift solution.
    const auto det = solve_h(sample_field(cfg.data.v, cfg.grid), {}, {}, HFunction{{}},
                             cfg.coeffs, cfg.interval, cfg.grid);
    CHECK(max_field_diff(res.series.at(MultiIndex::unit(1)).final(), det.final()) <= 1e-12);

    // At alpha = 2 eps_1 the shift multiplies the direct level-one
    // coefficient by sqrt(2).
    ChaosData at_zero;
    at_zero.terms[MultiIndex::zero()].v = cfg.data.v;
    const auto base = solve_system_chaos(cfg, at_zero, opts);
    const auto& lvl1 = base.series.at(MultiIndex::unit(1)).final();
    const auto& lvl2 = res.series.at(MultiIndex::from_characteristic_set({1, 1})).final();
    double worst = 0.0;
    for (std::size_t i = 0; i < lvl1.size(); ++i)
        worst = std::max(worst, std::abs(lvl2[i] - std::sqrt(2.0) * lvl1[i]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("chaos data outside the truncation is rejected") {
    auto cfg = small_config(GridMode::BoundedFiniteDifference);
    ChaosData data;
    data.terms[MultiIndex::unit(static_cast<std::uint32_t>(cfg.K) + 1)].v = cfg.data.v;
    CHECK_THROWS_AS(solve_system_chaos(cfg, data, {}), std::invalid_argument);
    CHECK_THROWS_AS(shift_solve(cfg, data, {}), std::invalid_argument);
}
