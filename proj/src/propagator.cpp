#include "wchaos/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <unordered_map>

#include "wchaos/fft.hpp"

namespace wchaos {

namespace {

bool time_match(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

// Exact average of m_k over one time step.  Integrating the basis factor
// instead of sampling it at the midpoint keeps the same second-order
// stepping but removes the dominant quadrature error of the oscillatory
// high-frequency elements.
double basis_step_average(int k, double t, double dt, double T) {
    const double hi = std::min(t + dt, T);
    return (cosine_antiderivative(k, hi, T) - cosine_antiderivative(k, t, T)) / (hi - t);
}

struct ParentLink {
    std::size_t pos;   // position of alpha - eps_k in the index list
    std::uint32_t k;   // basis index of the removed unit
    double w;          // sqrt(alpha_k)
};

struct IndexLayout {
    std::vector<MultiIndex> indices;
    std::vector<std::size_t> offsets;              // level n starts at offsets[n]
    std::vector<std::vector<ParentLink>> parents;  // per index
    std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> pos;
};

IndexLayout build_layout(int N, int K) {
    IndexLayout lay;
    lay.indices = enumerate(static_cast<std::uint32_t>(N), static_cast<std::uint32_t>(K));
    lay.offsets = level_offsets(lay.indices, static_cast<std::uint32_t>(N));
    lay.pos.reserve(lay.indices.size());
    for (std::size_t i = 0; i < lay.indices.size(); ++i) lay.pos[lay.indices[i]] = i;
    lay.parents.resize(lay.indices.size());
    for (std::size_t i = 0; i < lay.indices.size(); ++i) {
        const auto& alpha = lay.indices[i];
        for (const auto& [k, m] : alpha.entries()) {
            const auto parent = alpha.minus_unit(k);
            lay.parents[i].push_back(
                {lay.pos.at(parent), k, std::sqrt(static_cast<double>(m))});
        }
    }
    return lay;
}

// B u with the same finite-difference stencil the CN stepper uses.
void fd_apply_diffusion(const SpatialField& u, const CoefficientSet& cs, double t,
                        const SpatialGrid& grid, SpatialField& out) {
    const double dx = grid.dx();
    const auto n = u.size();
    const bool periodic = grid.mode == GridMode::PeriodicSpectral;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double um = (i > 0) ? u[i - 1] : (periodic ? u[n - 1] : 0.0);
        const double up = (i + 1 < n) ? u[i + 1] : (periodic ? u[0] : 0.0);
        const double x = grid.x(static_cast<int>(i));
        out[i] = cs.rho(t, x) * (up - 2.0 * u[i] + um) / (dx * dx) +
                 cs.sigma(t, x) * (up - um) / (2.0 * dx) + cs.nu(t, x) * u[i];
    }
}

struct Recorder {
    const SolveOptions* opts;
    const IndexLayout* lay;
    const PropagatorConfig* cfg;
    std::vector<double> store_times;
    PropagatorResult result;
    std::vector<std::vector<SpatialField>> stored;  // [store time][index]

    void init() {
        store_times = opts->store_times;
        if (opts->store_fields && store_times.empty()) store_times = {cfg->interval.T};
        stored.assign(store_times.size(), {});
        result.norms.times = opts->norm_times;
        result.norms.level_norm_sq.assign(opts->norm_times.size(),
                                          std::vector<double>(cfg->N + 1, 0.0));
        result.series = ChaosSeries<Trajectory>(cfg->N, cfg->K);
    }

    void record(double t, const std::vector<SpatialField>& fields) {
        for (std::size_t ti = 0; ti < result.norms.times.size(); ++ti) {
            if (!time_match(t, result.norms.times[ti])) continue;
            for (std::size_t i = 0; i < lay->indices.size(); ++i) {
                const int n = static_cast<int>(lay->indices[i].order());
                result.norms.level_norm_sq[ti][static_cast<std::size_t>(n)] +=
                    field_norm_sq(fields[i], cfg->grid, opts->norm_kind);
            }
        }
        if (!opts->store_fields) return;
        for (std::size_t si = 0; si < store_times.size(); ++si)
            if (time_match(t, store_times[si])) stored[si] = fields;
    }

    void finish() {
        if (!opts->store_fields) return;
        for (std::size_t i = 0; i < lay->indices.size(); ++i) {
            Trajectory traj;
            for (std::size_t si = 0; si < store_times.size(); ++si) {
                if (stored[si].empty()) continue;
                traj.times.push_back(store_times[si]);
                traj.fields.push_back(stored[si][i]);
            }
            result.series.set(lay->indices[i], std::move(traj));
        }
    }
};

PropagatorResult run_fd(const PropagatorConfig& cfg, const ChaosData& data,
                        const SolveOptions& opts) {
    cfg.grid.validate();
    const auto lay = build_layout(cfg.N, cfg.K);
    const auto count = lay.indices.size();
    const auto nx = static_cast<std::size_t>(cfg.grid.n_x);

    const std::size_t bytes = count * nx * sizeof(double) * 2;
    if (bytes > opts.memory_budget_bytes)
        throw NumericalError("propagator: field storage exceeds the memory budget");

    // Per-index data terms (null when the data series has no such index).
    std::vector<const DeterministicData*> data_at(count, nullptr);
    for (const auto& [gamma, term] : data.terms) {
        auto it = lay.pos.find(gamma);
        if (it == lay.pos.end())
            throw std::invalid_argument(
                "propagator: data index outside the (N, K) truncation: " + gamma.to_string());
        data_at[it->second] = &term;
    }

    std::vector<SpatialField> old_f(count, SpatialField(nx, 0.0));
    std::vector<SpatialField> new_f(count, SpatialField(nx, 0.0));
    for (std::size_t i = 0; i < count; ++i)
        if (data_at[i] && data_at[i]->v) old_f[i] = sample_field(data_at[i]->v, cfg.grid);

    Recorder rec{&opts, &lay, &cfg, {}, {}, {}};
    rec.init();
    rec.record(0.0, old_f);

    CnStepper stepper(cfg.grid, cfg.coeffs);
    const double dt = cfg.interval.dt();
    std::vector<SpatialField> bmid;  // B applied to previous-level midpoints
    SpatialField src(nx), gsample(nx), mid(nx);
    std::vector<double> mvals(static_cast<std::size_t>(cfg.K) + 1, 0.0);

    for (int j = 0; j < cfg.interval.n_t; ++j) {
        const double t = j * dt;
        const double tm = t + 0.5 * dt;
        for (int k = 1; k <= cfg.K; ++k)
            mvals[static_cast<std::size_t>(k)] = basis_step_average(k, t, dt, cfg.interval.T);

        for (int n = 0; n <= cfg.N; ++n) {
            const std::size_t lo = lay.offsets[static_cast<std::size_t>(n)];
            const std::size_t hi = lay.offsets[static_cast<std::size_t>(n) + 1];
            if (n >= 1) {
                const std::size_t plo = lay.offsets[static_cast<std::size_t>(n) - 1];
                const std::size_t phi = lo;
                bmid.resize(phi - plo);
                for (std::size_t p = plo; p < phi; ++p) {
                    mid.resize(nx);
                    for (std::size_t i = 0; i < nx; ++i)
                        mid[i] = 0.5 * (old_f[p][i] + new_f[p][i]);
                    fd_apply_diffusion(mid, cfg.coeffs, tm, cfg.grid, bmid[p - plo]);
                }
            }
            for (std::size_t idx = lo; idx < hi; ++idx) {
                bool has_src = false;
                src.assign(nx, 0.0);
                if (data_at[idx] && data_at[idx]->f) {
                    for (std::size_t i = 0; i < nx; ++i)
                        src[i] += data_at[idx]->f(tm, cfg.grid.x(static_cast<int>(i)));
                    has_src = true;
                }
                const std::size_t plo = n >= 1 ? lay.offsets[static_cast<std::size_t>(n) - 1] : 0;
                for (const auto& link : lay.parents[idx]) {
                    const double w = link.w * mvals[link.k];
                    const auto& bm = bmid[link.pos - plo];
                    for (std::size_t i = 0; i < nx; ++i) src[i] += w * bm[i];
                    has_src = true;
                    if (data_at[link.pos] && data_at[link.pos]->g) {
                        for (std::size_t i = 0; i < nx; ++i)
                            src[i] +=
                                w * data_at[link.pos]->g(tm, cfg.grid.x(static_cast<int>(i)));
                    }
                }
                new_f[idx] = old_f[idx];
                try {
                    stepper.step(new_f[idx], t, dt, 0.0, has_src ? &src : nullptr);
                } catch (const NumericalError& e) {
                    throw NumericalError(std::string(e.what()) + " (alpha=" +
                                         lay.indices[idx].to_string() + ", t=" +
                                         std::to_string(t) + ")");
                }
            }
        }
        old_f = new_f;
        rec.record(cfg.interval.time(j + 1), old_f);
    }
    rec.finish();
    return rec.result;
}

// Periodic grid, x-independent coefficients: every spectral mode evolves
// independently, so the march runs on a diagonal symbol, in chunks of modes
// to bound memory.  Scalar is double when the symbols and the data spectrum
// are real (b = sigma = 0, even data, no forcing) — half the arithmetic and
// memory traffic of the general complex march.
template <class Scalar>
PropagatorResult run_spectral_impl(const PropagatorConfig& cfg, const SolveOptions& opts,
                                   const std::vector<std::complex<double>>& vhat,
                                   const std::vector<int>& active, RealFFT& fft) {
    constexpr bool kReal = std::is_same_v<Scalar, double>;
    const auto lay = build_layout(cfg.N, cfg.K);
    const auto count = lay.indices.size();
    const int nx = cfg.grid.n_x;
    const int n_modes = fft.modes();

    const std::size_t per_mode = count * sizeof(Scalar) * 2;
    std::size_t chunk_max = std::max<std::size_t>(1, opts.memory_budget_bytes / (2 * per_mode));
    if (opts.store_fields) chunk_max = active.size();  // snapshots need one pass
    const double dx = cfg.grid.dx();
    const double gamma = opts.norm_kind == SpatialNormKind::L2
                             ? 0.0
                             : (opts.norm_kind == SpatialNormKind::H1 ? 1.0 : -1.0);

    Recorder rec{&opts, &lay, &cfg, {}, {}, {}};
    rec.init();
    // Spectral snapshots per store time (single chunk when storing).
    std::vector<std::vector<Scalar>> snaps(rec.store_times.size());

    const double dt = cfg.interval.dt();
    const double T = cfg.interval.T;
    std::vector<double> mvals(static_cast<std::size_t>(cfg.K) + 1, 0.0);

    for (std::size_t c0 = 0; c0 < active.size(); c0 += chunk_max) {
        const std::size_t csz = std::min(chunk_max, active.size() - c0);
        std::vector<Scalar> old_s(count * csz, Scalar(0.0)), new_s(count * csz, Scalar(0.0));
        std::vector<Scalar> c1(csz), wB(csz), finv(csz), s(csz);
        std::vector<double> yv(csz), pw(csz);
        for (std::size_t jj = 0; jj < csz; ++jj) {
            const int j = active[c0 + jj];
            yv[jj] = cfg.grid.wavenumber(j);
            pw[jj] = (j == 0 || (nx % 2 == 0 && j == n_modes - 1)) ? 1.0 : 2.0;
            // index (0) is position 0
            if constexpr (kReal)
                old_s[jj] = vhat[static_cast<std::size_t>(j)].real();
            else
                old_s[jj] = vhat[static_cast<std::size_t>(j)];
        }

        auto sqmag = [](const Scalar& v) {
            if constexpr (kReal)
                return v * v;
            else
                return std::norm(v);
        };
        auto accumulate = [&](double t, const std::vector<Scalar>& state) {
            for (std::size_t ti = 0; ti < rec.result.norms.times.size(); ++ti) {
                if (!time_match(t, rec.result.norms.times[ti])) continue;
                for (std::size_t i = 0; i < count; ++i) {
                    const int n = static_cast<int>(lay.indices[i].order());
                    double acc = 0.0;
                    for (std::size_t jj = 0; jj < csz; ++jj)
                        acc += pw[jj] * std::pow(1.0 + yv[jj] * yv[jj], gamma) *
                               sqmag(state[i * csz + jj]);
                    rec.result.norms.level_norm_sq[ti][static_cast<std::size_t>(n)] +=
                        acc * dx / nx;
                }
            }
            if (opts.store_fields)
                for (std::size_t si = 0; si < rec.store_times.size(); ++si)
                    if (time_match(t, rec.store_times[si])) snaps[si] = state;
        };
        accumulate(0.0, old_s);

        std::vector<std::complex<double>> fhat, ghat;
        for (int j = 0; j < cfg.interval.n_t; ++j) {
            const double t = j * dt;
            const double tm = t + 0.5 * dt;
            for (int k = 1; k <= cfg.K; ++k)
                mvals[static_cast<std::size_t>(k)] = basis_step_average(k, t, dt, T);
            const double a = cfg.coeffs.a(tm, 0.0), b = cfg.coeffs.b(tm, 0.0),
                         cc = cfg.coeffs.c(tm, 0.0);
            const double rho = cfg.coeffs.rho(tm, 0.0), sg = cfg.coeffs.sigma(tm, 0.0),
                         nu = cfg.coeffs.nu(tm, 0.0);
            for (std::size_t jj = 0; jj < csz; ++jj) {
                const double y = yv[jj];
                if constexpr (kReal) {
                    const double lamA = -a * y * y + cc;
                    const double lamB = -rho * y * y + nu;
                    const double inv = 1.0 / (1.0 - 0.5 * dt * lamA);
                    c1[jj] = (1.0 + 0.5 * dt * lamA) * inv;
                    wB[jj] = dt * lamB * inv;
                    finv[jj] = dt * inv;
                } else {
                    const std::complex<double> lamA(-a * y * y + cc, b * y);
                    const std::complex<double> lamB(-rho * y * y + nu, sg * y);
                    const std::complex<double> inv = 1.0 / (1.0 - 0.5 * dt * lamA);
                    c1[jj] = (1.0 + 0.5 * dt * lamA) * inv;
                    wB[jj] = dt * lamB * inv;
                    finv[jj] = dt * inv;
                }
            }
            if constexpr (!kReal) {
                if (cfg.data.f) {
                    fhat.resize(static_cast<std::size_t>(n_modes));
                    fft.forward(sample_field_t(cfg.data.f, tm, cfg.grid), fhat);
                }
                if (cfg.data.g) {
                    ghat.resize(static_cast<std::size_t>(n_modes));
                    fft.forward(sample_field_t(cfg.data.g, tm, cfg.grid), ghat);
                }
            }

            // Level 0.
            for (std::size_t jj = 0; jj < csz; ++jj) {
                Scalar v = c1[jj] * old_s[jj];
                if constexpr (!kReal)
                    if (cfg.data.f)
                        v += finv[jj] * fhat[static_cast<std::size_t>(active[c0 + jj])];
                new_s[jj] = v;
            }
            // Higher levels: source from previous-level midpoints.
            for (int n = 1; n <= cfg.N; ++n) {
                const std::size_t lo = lay.offsets[static_cast<std::size_t>(n)];
                const std::size_t hi = lay.offsets[static_cast<std::size_t>(n) + 1];
                for (std::size_t idx = lo; idx < hi; ++idx) {
                    std::fill(s.begin(), s.end(), Scalar(0.0));
                    for (const auto& link : lay.parents[idx]) {
                        const double w = 0.5 * link.w * mvals[link.k];
                        const Scalar* po = &old_s[link.pos * csz];
                        const Scalar* pn = &new_s[link.pos * csz];
                        for (std::size_t jj = 0; jj < csz; ++jj)
                            s[jj] += w * (po[jj] + pn[jj]);
                    }
                    Scalar* uo = &old_s[idx * csz];
                    Scalar* un = &new_s[idx * csz];
                    for (std::size_t jj = 0; jj < csz; ++jj)
                        un[jj] = c1[jj] * uo[jj] + wB[jj] * s[jj];
                    if constexpr (!kReal)
                        if (n == 1 && cfg.data.g) {
                            const double w =
                                lay.parents[idx][0].w * mvals[lay.parents[idx][0].k];
                            for (std::size_t jj = 0; jj < csz; ++jj)
                                un[jj] += w * finv[jj] *
                                          ghat[static_cast<std::size_t>(active[c0 + jj])];
                        }
                }
            }
            std::swap(old_s, new_s);
            accumulate(cfg.interval.time(j + 1), old_s);
        }

        if (opts.store_fields) {
            // Single chunk: expand snapshots into physical fields.
            rec.stored.assign(rec.store_times.size(), {});
            std::vector<std::complex<double>> full(static_cast<std::size_t>(n_modes));
            for (std::size_t si = 0; si < rec.store_times.size(); ++si) {
                if (snaps[si].empty()) continue;
                rec.stored[si].assign(count, SpatialField(static_cast<std::size_t>(nx)));
                for (std::size_t i = 0; i < count; ++i) {
                    std::fill(full.begin(), full.end(), std::complex<double>(0.0));
                    for (std::size_t jj = 0; jj < csz; ++jj)
                        full[static_cast<std::size_t>(active[c0 + jj])] = snaps[si][i * csz + jj];
                    fft.inverse(full, rec.stored[si][i]);
                }
            }
        }
    }
    rec.finish();
    return rec.result;
}

bool coeff_zero(const Coefficient& c) {
    return c.const_in_x() && c.const_in_t() && c(0.0, 0.0) == 0.0;
}

PropagatorResult run_spectral(const PropagatorConfig& cfg, const SolveOptions& opts) {
    cfg.grid.validate();
    RealFFT fft(cfg.grid.n_x);
    const int n_modes = fft.modes();

    std::vector<std::complex<double>> vhat(static_cast<std::size_t>(n_modes));
    fft.forward(sample_field(cfg.data.v, cfg.grid), vhat);

    const bool has_forcing = static_cast<bool>(cfg.data.f) || static_cast<bool>(cfg.data.g);
    std::vector<int> active;
    double peak = 0.0, imag_peak = 0.0;
    for (const auto& v : vhat) {
        peak = std::max(peak, std::abs(v));
        imag_peak = std::max(imag_peak, std::abs(v.imag()));
    }
    if (has_forcing || opts.mode_cutoff <= 0.0) {
        for (int j = 0; j < n_modes; ++j) active.push_back(j);
    } else {
        for (int j = 0; j < n_modes; ++j)
            if (std::abs(vhat[static_cast<std::size_t>(j)]) >= opts.mode_cutoff * peak)
                active.push_back(j);
        if (active.empty()) active.push_back(0);
    }

    const bool real_march = coeff_zero(cfg.coeffs.b) && coeff_zero(cfg.coeffs.sigma) &&
                            !has_forcing && imag_peak <= 1e-13 * std::max(peak, 1e-300);
    if (real_march) return run_spectral_impl<double>(cfg, opts, vhat, active, fft);
    return run_spectral_impl<std::complex<double>>(cfg, opts, vhat, active, fft);
}

}  // namespace

PropagatorResult solve_system(const PropagatorConfig& config, const SolveOptions& options) {
    if (config.N < 0 || config.K < 1)
        throw std::invalid_argument("propagator: truncation requires N >= 0, K >= 1");
    if (config.grid.mode == GridMode::PeriodicSpectral && config.coeffs.x_independent())
        return run_spectral(config, options);
    ChaosData data;
    data.terms[MultiIndex::zero()] = config.data;
    return run_fd(config, data, options);
}

PropagatorResult solve_system_chaos(const PropagatorConfig& config, const ChaosData& data,
                                    const SolveOptions& options) {
    if (config.N < 0 || config.K < 1)
        throw std::invalid_argument("propagator: truncation requires N >= 0, K >= 1");
    return run_fd(config, data, options);
}

PropagatorResult shift_solve(const PropagatorConfig& config, const ChaosData& data,
                             const SolveOptions& options) {
    SolveOptions det_opts = options;
    det_opts.store_fields = true;
    det_opts.norm_times.clear();
    if (det_opts.store_times.empty()) det_opts.store_times = {config.interval.T};

    PropagatorResult out;
    out.series = ChaosSeries<Trajectory>(config.N, config.K);
    out.norms.times = options.norm_times;

    for (const auto& [gamma, term] : data.terms) {
        const int ng = static_cast<int>(gamma.order());
        if (ng > config.N || static_cast<int>(gamma.max_support()) > config.K)
            throw std::invalid_argument("shift_solve: data index outside the (N, K) truncation");
        PropagatorConfig sub = config;
        sub.N = config.N - ng;
        sub.data = term;
        const auto det = solve_system(sub, det_opts);
        const double lf_gamma = log_factorial(gamma);
        for (const auto& [alpha, traj] : det.series.coefficients()) {
            const auto target = alpha.plus(gamma);
            if (static_cast<int>(target.order()) > config.N) continue;
            const double scale =
                std::exp(0.5 * (log_factorial(target) - log_factorial(alpha) - lf_gamma));
            Trajectory scaled = traj;
            for (auto& f : scaled.fields)
                for (auto& v : f) v *= scale;
            if (out.series.contains(target)) {
                Trajectory sum = out.series.at(target);
                for (std::size_t fi = 0; fi < sum.fields.size(); ++fi)
                    for (std::size_t i = 0; i < sum.fields[fi].size(); ++i)
                        sum.fields[fi][i] += scaled.fields[fi][i];
                out.series.set(target, std::move(sum));
            } else {
                out.series.set(target, std::move(scaled));
            }
        }
    }
    // Tabulate level norms from the assembled series.
    out.norms.level_norm_sq.assign(out.norms.times.size(),
                                   std::vector<double>(config.N + 1, 0.0));
    for (std::size_t ti = 0; ti < out.norms.times.size(); ++ti)
        for (const auto& [alpha, traj] : out.series.coefficients()) {
            const int n = static_cast<int>(alpha.order());
            out.norms.level_norm_sq[ti][static_cast<std::size_t>(n)] += field_norm_sq(
                traj.at_time(out.norms.times[ti]), config.grid, options.norm_kind);
        }
    return out;
}

ChaosSeries<std::vector<double>> fourier_mode_solve(double y, int N, int K,
                                                    const TimeInterval& interval) {
    const auto lay = build_layout(N, K);
    const auto count = lay.indices.size();
    const double dt = interval.dt();
    const double lam = -y * y;  // A = B = -y^2 at fixed frequency
    const double inv = 1.0 / (1.0 - 0.5 * dt * lam);
    const double c1 = (1.0 + 0.5 * dt * lam) * inv;
    const double wB = dt * lam * inv;

    std::vector<std::vector<double>> traj(count,
                                          std::vector<double>(static_cast<std::size_t>(interval.n_t) + 1, 0.0));
    std::vector<double> old_v(count, 0.0), new_v(count, 0.0);
    old_v[0] = std::exp(-0.5 * y * y);
    traj[0][0] = old_v[0];

    std::vector<double> mvals(static_cast<std::size_t>(K) + 1, 0.0);
    for (int j = 0; j < interval.n_t; ++j) {
        const double t = j * dt;
        for (int k = 1; k <= K; ++k)
            mvals[static_cast<std::size_t>(k)] = basis_step_average(k, t, dt, interval.T);
        new_v[0] = c1 * old_v[0];
        for (std::size_t idx = 1; idx < count; ++idx) {
            double s = 0.0;
            for (const auto& link : lay.parents[idx])
                s += link.w * mvals[link.k] * 0.5 * (old_v[link.pos] + new_v[link.pos]);
            new_v[idx] = c1 * old_v[idx] + wB * s;
        }
        old_v = new_v;
        for (std::size_t i = 0; i < count; ++i) traj[i][static_cast<std::size_t>(j) + 1] = old_v[i];
    }

    ChaosSeries<std::vector<double>> series(N, K);
    for (std::size_t i = 0; i < count; ++i) series.set(lay.indices[i], std::move(traj[i]));
    return series;
}

double level_norm_sq(const ChaosSeries<Trajectory>& series, int n, double t,
                     const SpatialGrid& grid, SpatialNormKind kind) {
    if (n > series.N()) throw std::invalid_argument("level_norm_sq: level beyond the truncation");
    double acc = 0.0;
    for (const auto& [alpha, traj] : series.coefficients()) {
        if (static_cast<int>(alpha.order()) != n) continue;
        acc += field_norm_sq(traj.at_time(t), grid, kind);
    }
    return acc;
}

}  // namespace wchaos
