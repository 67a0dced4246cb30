#include "wchaos/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "wchaos/cm_basis.hpp"
#include "wchaos/config.hpp"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"
#include "wchaos/rng.hpp"

namespace wchaos {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

SpatialField gaussian_datum(const SpatialGrid& grid) {
    return sample_field([](double x) { return std::exp(-0.5 * x * x); }, grid);
}

PropagatorConfig example_config(double T, int n_x, double dt, int N, int K) {
    PropagatorConfig cfg;
    cfg.N = N;
    cfg.K = K;
    cfg.grid = {20.0, n_x, GridMode::PeriodicSpectral};
    cfg.interval = {T, std::max(2, static_cast<int>(std::lround(T / dt)))};
    cfg.coeffs = CoefficientSet::heat_example();
    cfg.data.v = [](double x) { return std::exp(-0.5 * x * x); };
    return cfg;
}

std::vector<double> final_level_norms(const PropagatorConfig& cfg) {
    SolveOptions opts;
    opts.store_fields = false;
    opts.norm_times = {cfg.interval.T};
    const auto res = solve_system(cfg, opts);
    return res.norms.level_norm_sq.at(0);
}

}  // namespace

SuiteResult verify_growth() {
    SuiteResult suite{"growth", {}};

    // Check 1: computed level norms against the quadrature law, each horizon
    // evaluated at its final time (the cosine antiderivatives vanish there,
    // so the basis truncation K carries no level mass and the comparison
    // isolates the solver).
    for (double T : {0.5, 1.0}) {
        const auto sn = final_level_norms(example_config(T, 1024, 1e-3, 6, 16));
        double worst = 0.0;
        int worst_n = 0;
        for (int n = 0; n <= 6; ++n) {
            const double oracle = growth_oracle(n, T).value;
            const double rel = std::abs(sn[static_cast<std::size_t>(n)] - oracle) / oracle;
            if (rel > worst) {
                worst = rel;
                worst_n = n;
            }
        }
        suite.checks.push_back({1, "level norms vs quadrature, t=" + fmt(T), worst <= 0.02,
                                "max rel err " + fmt(worst) + " at n=" + std::to_string(worst_n) +
                                    ", tol 0.02"});
    }

    // Check 1 (continued): K-convergence, K=16 vs K=24 on a shared coarse
    // discretization.
    for (double T : {0.5, 1.0}) {
        const auto s16 = final_level_norms(example_config(T, 64, 1e-2, 6, 16));
        const auto s24 = final_level_norms(example_config(T, 64, 1e-2, 6, 24));
        double worst = 0.0;
        for (int n = 0; n <= 6; ++n) {
            const double a = s16[static_cast<std::size_t>(n)];
            const double b = s24[static_cast<std::size_t>(n)];
            worst = std::max(worst, std::abs(a - b) / b);
        }
        suite.checks.push_back({1, "level norms K=16 vs K=24, t=" + fmt(T), worst <= 0.005,
                                "max rel diff " + fmt(worst) + ", tol 0.005"});
    }

    // Check 2: the normalized level-norm ratios stay within one order of
    // magnitude of each other.
    {
        double lo = 0.0, hi = 0.0;
        for (int n = 1; n <= 8; ++n) {
            const double r = growth_oracle(n, 1.0).stirling_ratio;
            lo = (n == 1) ? r : std::min(lo, r);
            hi = (n == 1) ? r : std::max(hi, r);
        }
        suite.checks.push_back({2, "normalized ratio spread n=1..8, t=1", hi / lo <= 10.0,
                                "max/min = " + fmt(hi / lo) + ", tol 10"});
    }

    // Check 3: level contributions with the 1/|alpha|! weight decay
    // geometrically and the weighted sum is converged by N=10.
    {
        const auto sn = final_level_norms(example_config(1.0, 512, 2e-3, 12, 6));
        std::vector<double> c(13);
        for (int n = 0; n <= 12; ++n)
            c[static_cast<std::size_t>(n)] =
                sn[static_cast<std::size_t>(n)] * std::exp(-std::lgamma(n + 1.0));
        double worst_ratio = 0.0;
        for (int n = 4; n <= 11; ++n)
            worst_ratio = std::max(worst_ratio, c[static_cast<std::size_t>(n) + 1] /
                                                    c[static_cast<std::size_t>(n)]);
        double s10 = 0.0, s12 = 0.0;
        for (int n = 0; n <= 12; ++n) {
            if (n <= 10) s10 += c[static_cast<std::size_t>(n)];
            s12 += c[static_cast<std::size_t>(n)];
        }
        const double change = (s12 - s10) / s10;
        const bool pass = worst_ratio <= 0.9 && change < 1e-3;
        suite.checks.push_back({3, "weighted level contributions, p=q=0, t=1", pass,
                                "max ratio " + fmt(worst_ratio) + " (tol 0.9), partial-sum change " +
                                    fmt(change) + " (tol 1e-3)"});
    }
    return suite;
}

SuiteResult verify_stransform() {
    SuiteResult suite{"stransform", {}};
    const double T = 1.0;
    auto cfg = example_config(T, 512, 1e-3, 8, 2);
    SolveOptions opts;
    opts.store_times = {T};
    const auto res = solve_system(cfg, opts);

    ChaosSeries<SpatialField> finals(cfg.N, cfg.K);
    for (const auto& [alpha, traj] : res.series.coefficients())
        finals.set(alpha, traj.at_time(T));

    HFunction h{{0.3, 0.2}};
    const SpatialField chaos_side = s_evaluate(finals, h);

    const Trajectory direct = solve_h(gaussian_datum(cfg.grid), {}, {}, h, cfg.coeffs,
                                      cfg.interval, cfg.grid);
    const SpatialField& pde_side = direct.final();

    SpatialField diff(pde_side.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = chaos_side[i] - pde_side[i];
    const double rel = field_norm(diff, cfg.grid, SpatialNormKind::L2) /
                       field_norm(pde_side, cfg.grid, SpatialNormKind::L2);
    suite.checks.push_back({4, "series evaluation vs direct solve, h=0.3 m1 + 0.2 m2",
                            rel <= 1e-3, "rel L2 distance " + fmt(rel) + ", tol 1e-3"});

    // Closed form: a heat kernel with time-dependent diffusivity 1 + h(t);
    // the Gaussian variance grows by 2 int_0^t (1 + h).
    const double s = 1.0 + 2.0 * (T + 0.3 * cosine_antiderivative(1, T, T) +
                                  0.2 * cosine_antiderivative(2, T, T));
    SpatialField exact(pde_side.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double x = cfg.grid.x(static_cast<int>(i));
        exact[i] = std::exp(-0.5 * x * x / s) / std::sqrt(s);
    }
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = pde_side[i] - exact[i];
    const double rel2 = field_norm(diff, cfg.grid, SpatialNormKind::L2) /
                        field_norm(exact, cfg.grid, SpatialNormKind::L2);
    suite.checks.push_back({4, "direct solve vs closed-form Gaussian", rel2 <= 1e-4,
                            "rel L2 distance " + fmt(rel2) + ", tol 1e-4"});
    return suite;
}

SuiteResult verify_parseval(std::uint64_t seed) {
    SuiteResult suite{"parseval", {}};

    // Check 5: the fixed-frequency recursion against the closed-form
    // coefficients.  Evaluation times sit away from the zeros of the basis
    // antiderivatives, where the per-coefficient relative error is
    // ill-defined (the exact value crosses zero).  Even so, at dt = 1e-4
    // the second-order stepping carries an irreducible O((pi (K-1) dt)^2)
    // error on coefficients with repeated highest-mode factors — about
    // 3e-6, above the 1e-6 target; the check is reported as observed.  The
    // companion check repeats the comparison at dt = 2e-5, where the same
    // two computations agree well below the target, pinning the
    // discrepancy on the step size rather than on either implementation.
    auto mode_vs_oracle = [](int n_t) {
        const TimeInterval interval{1.0, n_t};
        double worst = 0.0;
        for (double y : {0.5, 1.0, 2.0}) {
            const auto series = fourier_mode_solve(y, 4, 4, interval);
            for (const auto& [alpha, traj] : series.coefficients()) {
                for (double t : {0.15, 0.25}) {
                    const auto j = static_cast<std::size_t>(std::lround(t / interval.dt()));
                    const double oracle = gbm_coeff(alpha, t, y, interval);
                    worst = std::max(worst, std::abs(traj[j] - oracle) / std::abs(oracle));
                }
            }
        }
        return worst;
    };
    {
        const double worst = mode_vs_oracle(10000);
        suite.checks.push_back({5, "mode recursion vs closed form, |alpha| <= 4, dt=1e-4",
                                worst <= 1e-6,
                                "max rel err " + fmt(worst) +
                                    ", tol 1e-6; floor is O((3 pi dt)^2) from second-order "
                                    "stepping of mode-4 factors"});
        const double refined = mode_vs_oracle(50000);
        suite.checks.push_back({5, "mode recursion vs closed form, |alpha| <= 4, dt=2e-5",
                                refined <= 1e-6, "max rel err " + fmt(refined) + ", tol 1e-6"});
    }

    // Check 6: chaos-side second moment (Parseval sum) and mean against
    // Monte Carlo at y = 1, t = 0.5.
    {
        const double t = 0.5, y = 1.0;
        const TimeInterval interval{t, 1000};
        const auto series = fourier_mode_solve(y, 12, 4, interval);
        double sum = 0.0;
        for (const auto& [alpha, traj] : series.coefficients()) sum += traj.back() * traj.back();
        const double mean = series.at(MultiIndex::zero()).back();

        McConfig mc_cfg;
        mc_cfg.paths = 100000;
        mc_cfg.steps = 1000;
        mc_cfg.seed = seed;
        const McEstimate mc = mc_moments(t, y, mc_cfg);

        const double dm = std::abs(mean - mc.mean);
        const double d2 = std::abs(sum - mc.second_moment);
        const bool pass = dm <= 3.0 * mc.mean_se && d2 <= 3.0 * mc.second_moment_se;
        suite.checks.push_back(
            {6, "Parseval sum |alpha| <= 12 vs Monte Carlo, y=1, t=0.5", pass,
             "mean diff " + fmt(dm) + " (3se " + fmt(3.0 * mc.mean_se) + "), 2nd-moment diff " +
                 fmt(d2) + " (3se " + fmt(3.0 * mc.second_moment_se) + ")"});
    }
    return suite;
}

SuiteResult verify_orthonormality(std::uint64_t seed) {
    // The products xi_a xi_b with third-order Hermite factors have per-sample
    // standard deviations up to ~9.6, so at 1e5 samples several of the 630
    // pair estimates carry standard errors of 0.018-0.030 — the largest
    // deviation over all pairs is then expected around 0.05, above the 0.02
    // target, for (almost) every seed.  The check at the target sample count
    // is reported as observed, with the worst deviation expressed in
    // standard errors; the companion run at 8e6 samples shows the estimates
    // collapsing onto the identity once the noise floor is below the
    // tolerance.
    SuiteResult suite{"orthonormality", {}};
    const auto indices = enumerate(3, 4);
    const std::size_t count = indices.size();

    struct GramResult {
        double worst = 0.0;     // largest |estimate - delta|
        double worst_se = 0.0;  // standard error of that estimate
        std::string pair;
    };
    auto run_gram = [&](std::uint64_t paths) {
        std::vector<double> gram(count * count, 0.0), gram2(count * count, 0.0);
        const std::uint64_t block_size = 4096;
        std::vector<double> zeta(4), xi(count);
        std::uint64_t done = 0, block = 0;
        while (done < paths) {
            const std::uint64_t m = std::min(block_size, paths - done);
            auto rng = GaussianRng::for_block(seed, block++);
            for (std::uint64_t p = 0; p < m; ++p) {
                for (auto& z : zeta) z = rng.normal();
                for (std::size_t i = 0; i < count; ++i) xi[i] = xi_eval(indices[i], zeta);
                for (std::size_t i = 0; i < count; ++i)
                    for (std::size_t j = i; j < count; ++j) {
                        const double v = xi[i] * xi[j];
                        gram[i * count + j] += v;
                        gram2[i * count + j] += v * v;
                    }
            }
            done += m;
        }
        GramResult r;
        const double n = static_cast<double>(paths);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = i; j < count; ++j) {
                const double est = gram[i * count + j] / n;
                const double var = std::max(0.0, gram2[i * count + j] / n - est * est);
                const double dev = std::abs(est - (i == j ? 1.0 : 0.0));
                if (dev > r.worst) {
                    r.worst = dev;
                    r.worst_se = std::sqrt(var / n);
                    r.pair = "(" + indices[i].to_string() + ")x(" + indices[j].to_string() + ")";
                }
            }
        return r;
    };

    {
        const auto r = run_gram(100000);
        suite.checks.push_back(
            {7, "E xi_a xi_b vs identity, |alpha|,|beta| <= 3, support <= 4, M=1e5",
             r.worst <= 0.02,
             "max deviation " + fmt(r.worst) + " at " + r.pair + " = " +
                 fmt(r.worst / r.worst_se) +
                 " standard errors, tol 0.02; worst-pair noise floor at M=1e5 is above the "
                 "tolerance"});
    }
    {
        const auto r = run_gram(8000000);
        suite.checks.push_back(
            {7, "E xi_a xi_b vs identity, |alpha|,|beta| <= 3, support <= 4, M=8e6",
             r.worst <= 0.02, "max deviation " + fmt(r.worst) + " at " + r.pair + ", tol 0.02"});
    }
    return suite;
}

SuiteResult verify_shift() {
    SuiteResult suite{"shift", {}};

    PropagatorConfig cfg;
    cfg.N = 4;
    cfg.K = 3;
    cfg.grid = {4.0, 24, GridMode::BoundedFiniteDifference};
    cfg.interval = {0.5, 40};
    cfg.coeffs.a = Coefficient([](double, double x) { return 1.0 + 0.1 * std::sin(x); },
                               false, true);
    cfg.coeffs.b = Coefficient(0.1);
    cfg.coeffs.c = Coefficient(0.05);
    cfg.coeffs.rho = Coefficient(0.3);
    cfg.coeffs.sigma = Coefficient(0.15);
    cfg.coeffs.nu = Coefficient(0.1);
    cfg.coeffs.ellipticity = 0.9;
    cfg.coeffs.bound_C0 = 1.1;

    auto gauss = [](double c) {
        return [c](double x) { return c * std::exp(-x * x); };
    };

    std::vector<ChaosData> instances(2);
    instances[0].terms[MultiIndex::zero()] = {
        gauss(1.0), [](double t, double x) { return 0.1 * x * std::exp(-0.5 * x * x - t); },
        nullptr};
    instances[0].terms[MultiIndex::unit(1)] = {
        gauss(0.5), nullptr, [](double, double x) { return 0.05 * std::exp(-x * x); }};
    instances[0].terms[MultiIndex::unit(2)] = {
        nullptr, [](double, double x) { return 0.2 * std::cos(x) * std::exp(-x * x); },
        nullptr};
    instances[1].terms[MultiIndex::unit(1).plus_unit(1)] = {gauss(0.8), nullptr, nullptr};
    instances[1].terms[MultiIndex::unit(1).plus_unit(2)] = {gauss(-0.4), nullptr, nullptr};
    instances[1].terms[MultiIndex::unit(3)] = {
        nullptr, nullptr, [](double t, double x) { return 0.1 * std::exp(-x * x) * (1.0 + t); }};

    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    double worst = 0.0;
    for (std::size_t inst = 0; inst < instances.size(); ++inst) {
        const auto brute = solve_system_chaos(cfg, instances[inst], opts);
        const auto shifted = shift_solve(cfg, instances[inst], opts);
        double scale = 0.0;
        for (const auto& [alpha, traj] : brute.series.coefficients())
            for (double v : traj.final()) scale = std::max(scale, std::abs(v));
        for (const auto& [alpha, traj] : brute.series.coefficients()) {
            const SpatialField* other =
                shifted.series.contains(alpha) ? &shifted.series.at(alpha).final() : nullptr;
            for (std::size_t i = 0; i < traj.final().size(); ++i) {
                const double b = traj.final()[i];
                const double s = other ? (*other)[i] : 0.0;
                worst = std::max(worst, std::abs(b - s) / scale);
            }
        }
    }
    suite.checks.push_back({8, "shift identity vs brute force, |gamma| <= 2, N = 4",
                            worst <= 1e-10, "max rel diff " + fmt(worst) + ", tol 1e-10"});
    return suite;
}

SuiteResult verify_estimate() {
    SuiteResult suite{"estimate", {}};
    const auto cfg = preset_config("full2nd-varcoeff").prop;
    SolveOptions opts;
    opts.store_times = {cfg.interval.T};
    const auto res = solve_system(cfg, opts);

    // Per-index squared norms in the negative-order spatial norm, grouped by
    // level under the (r, l) chaos weights.
    std::vector<std::pair<const MultiIndex*, double>> norms;
    for (const auto& [alpha, traj] : res.series.coefficients())
        norms.emplace_back(&alpha,
                           field_norm_sq(traj.final(), cfg.grid, SpatialNormKind::Hm1));

    std::string passing;
    bool any = false;
    std::string details;
    for (double r : {-2.0, -3.0})
        for (double l : {-2.0, -3.0}) {
            std::vector<double> w(static_cast<std::size_t>(cfg.N) + 1, 0.0);
            for (const auto& [alpha, nm] : norms)
                w[alpha->order()] += std::exp(weight_log(*alpha, r, l)) * nm;
            bool decay = true;
            for (int n = 4; n < cfg.N; ++n) {
                const double num = w[static_cast<std::size_t>(n) + 1];
                const double den = w[static_cast<std::size_t>(n)];
                if (den <= 0.0 || num > 0.9 * den) decay = false;
            }
            double s7 = 0.0, s8 = 0.0;
            for (int n = 0; n <= cfg.N; ++n) {
                if (n <= 7) s7 += w[static_cast<std::size_t>(n)];
                s8 += w[static_cast<std::size_t>(n)];
            }
            const double change = (s8 - s7) / s7;
            if (decay && std::isfinite(s8) && change < 0.01) {
                any = true;
                if (!passing.empty()) passing += " ";
                passing += "(r=" + fmt(r) + ",l=" + fmt(l) + ",change=" + fmt(change) + ")";
            }
        }
    suite.checks.push_back({9, "weighted decay for some (r, l) <= -2, varcoeff preset", any,
                            any ? "passing weights: " + passing
                                : "no (r, l) in {-2,-3}^2 gives geometric decay"});
    return suite;
}

std::vector<SuiteResult> verify_suites(const std::string& selector, std::uint64_t seed) {
    std::vector<SuiteResult> out;
    const bool all = selector == "all";
    bool known = all;
    if (all || selector == "growth") out.push_back(verify_growth()), known = true;
    if (all || selector == "parseval") out.push_back(verify_parseval(seed)), known = true;
    if (all || selector == "stransform") out.push_back(verify_stransform()), known = true;
    if (all || selector == "orthonormality")
        out.push_back(verify_orthonormality(seed)), known = true;
    if (all || selector == "shift") out.push_back(verify_shift()), known = true;
    if (all || selector == "estimate") out.push_back(verify_estimate()), known = true;
    if (!known) throw std::invalid_argument("unknown verification suite '" + selector + "'");
    return out;
}

std::string format_report(const std::vector<SuiteResult>& suites) {
    std::ostringstream os;
    for (const auto& s : suites)
        for (const auto& c : s.checks)
            os << "[" << s.suite << "] " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << " ("
               << c.detail << ")\n";
    return os.str();
}

}  // namespace wchaos
