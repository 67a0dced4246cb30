#include "wchaos/parabolic1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wchaos/fft.hpp"

namespace wchaos {

double SpatialGrid::wavenumber(int j) const {
    return std::numbers::pi * j / L;
}

void SpatialGrid::validate() const {
    if (L <= 0.0) throw std::domain_error("SpatialGrid: half-width must be positive");
    if (n_x < 16) throw std::domain_error("SpatialGrid: n_x must be >= 16");
}

const SpatialField& Trajectory::at_time(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return fields[i];
    throw std::out_of_range("Trajectory::at_time: time not stored");
}

CoefficientSet CoefficientSet::heat_example() {
    CoefficientSet cs;
    cs.a = Coefficient(1.0);
    cs.rho = Coefficient(1.0);
    cs.bound_C0 = 1.0;
    cs.ellipticity = 1.0;
    return cs;
}

SpatialField sample_field(const std::function<double(double)>& fn, const SpatialGrid& grid) {
    SpatialField f(static_cast<std::size_t>(grid.n_x), 0.0);
    if (fn)
        for (int i = 0; i < grid.n_x; ++i) f[static_cast<std::size_t>(i)] = fn(grid.x(i));
    return f;
}

SpatialField sample_field_t(const std::function<double(double, double)>& fn, double t,
                            const SpatialGrid& grid) {
    SpatialField f(static_cast<std::size_t>(grid.n_x), 0.0);
    if (fn)
        for (int i = 0; i < grid.n_x; ++i) f[static_cast<std::size_t>(i)] = fn(t, grid.x(i));
    return f;
}

namespace {

struct OpCoeffs {
    const Coefficient* second;
    const Coefficient* first;
    const Coefficient* zeroth;
};

OpCoeffs select(OperatorKind which, const CoefficientSet& cs) {
    if (which == OperatorKind::Drift) return {&cs.a, &cs.b, &cs.c};
    return {&cs.rho, &cs.sigma, &cs.nu};
}

// Spectral first and second derivatives on the periodic grid.
void spectral_derivatives(const SpatialField& u, const SpatialGrid& grid, SpatialField& ux,
                          SpatialField& uxx) {
    RealFFT fft(grid.n_x);
    const int m = fft.modes();
    std::vector<std::complex<double>> U(static_cast<std::size_t>(m));
    fft.forward(u, U);
    std::vector<std::complex<double>> U1(U), U2(U);
    for (int j = 0; j < m; ++j) {
        const double y = grid.wavenumber(j);
        U1[static_cast<std::size_t>(j)] *= std::complex<double>(0.0, y);
        U2[static_cast<std::size_t>(j)] *= -y * y;
    }
    // Nyquist mode of the first derivative has no real representation.
    if (grid.n_x % 2 == 0) U1[static_cast<std::size_t>(m - 1)] = 0.0;
    ux.resize(u.size());
    uxx.resize(u.size());
    fft.inverse(U1, ux);
    fft.inverse(U2, uxx);
}

}  // namespace

SpatialField apply_operator(const SpatialField& field, OperatorKind which,
                            const CoefficientSet& coeffs, double t, const SpatialGrid& grid) {
    if (static_cast<int>(field.size()) != grid.n_x)
        throw std::domain_error("apply_operator: field does not match the grid");
    const auto [c2, c1, c0] = select(which, coeffs);
    SpatialField out(field.size(), 0.0);
    if (grid.mode == GridMode::PeriodicSpectral) {
        SpatialField ux, uxx;
        spectral_derivatives(field, grid, ux, uxx);
        for (int i = 0; i < grid.n_x; ++i) {
            const double x = grid.x(i);
            const auto k = static_cast<std::size_t>(i);
            out[k] = (*c2)(t, x) * uxx[k] + (*c1)(t, x) * ux[k] + (*c0)(t, x) * field[k];
        }
    } else {
        const double dx = grid.dx();
        for (int i = 0; i < grid.n_x; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double um = (i > 0) ? field[k - 1] : 0.0;
            const double up = (i + 1 < grid.n_x) ? field[k + 1] : 0.0;
            const double x = grid.x(i);
            out[k] = (*c2)(t, x) * (up - 2.0 * field[k] + um) / (dx * dx) +
                     (*c1)(t, x) * (up - um) / (2.0 * dx) + (*c0)(t, x) * field[k];
        }
    }
    return out;
}

namespace {

// Thomas algorithm, overwriting rhs with the solution.
void solve_tridiag(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// Cyclic tridiagonal solve (Sherman-Morrison), corner entries cl (row 0,
// col n-1) and cu (row n-1, col 0).
void solve_cyclic(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                  double cl, double cu, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    const double gamma = -diag[0];
    std::vector<double> d(diag);
    d[0] -= gamma;
    d[n - 1] -= cl * cu / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = cu;
    auto d1 = d;
    auto l1 = lower;
    auto up1 = upper;
    solve_tridiag(l1, d1, up1, rhs);
    solve_tridiag(lower, d, upper, u);
    const double frac = (rhs[0] + cl * rhs[n - 1] / gamma) /
                        (1.0 + u[0] + cl * u[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= frac * u[i];
}

}  // namespace

struct CnStepper::Impl {
    bool spectral = false;
    std::unique_ptr<RealFFT> fft;
    std::vector<std::complex<double>> U, F;
    std::vector<double> lower, diag, upper, rhs;
};

CnStepper::CnStepper(SpatialGrid grid, CoefficientSet coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)), impl_(std::make_unique<Impl>()) {
    grid_.validate();
    impl_->spectral =
        grid_.mode == GridMode::PeriodicSpectral && coeffs_.x_independent();
    if (impl_->spectral) {
        impl_->fft = std::make_unique<RealFFT>(grid_.n_x);
        impl_->U.resize(static_cast<std::size_t>(impl_->fft->modes()));
        impl_->F.resize(static_cast<std::size_t>(impl_->fft->modes()));
    } else {
        const auto n = static_cast<std::size_t>(grid_.n_x);
        impl_->lower.resize(n);
        impl_->diag.resize(n);
        impl_->upper.resize(n);
        impl_->rhs.resize(n);
    }
}

CnStepper::~CnStepper() = default;
CnStepper::CnStepper(CnStepper&&) noexcept = default;

bool CnStepper::spectral() const { return impl_->spectral; }

void CnStepper::step(SpatialField& u, double t, double dt, double h_mid,
                     const SpatialField* forcing_mid) {
    if (static_cast<int>(u.size()) != grid_.n_x)
        throw std::domain_error("CnStepper::step: field does not match the grid");
    const double tm = t + 0.5 * dt;
    if (impl_->spectral) {
        const double ae = coeffs_.a(tm, 0.0) + h_mid * coeffs_.rho(tm, 0.0);
        const double be = coeffs_.b(tm, 0.0) + h_mid * coeffs_.sigma(tm, 0.0);
        const double ce = coeffs_.c(tm, 0.0) + h_mid * coeffs_.nu(tm, 0.0);
        auto& U = impl_->U;
        auto& F = impl_->F;
        impl_->fft->forward(u, U);
        if (forcing_mid) impl_->fft->forward(*forcing_mid, F);
        const int m = impl_->fft->modes();
        for (int j = 0; j < m; ++j) {
            const double y = grid_.wavenumber(j);
            const std::complex<double> lam(-ae * y * y + ce, be * y);
            const auto k = static_cast<std::size_t>(j);
            std::complex<double> num = (1.0 + 0.5 * dt * lam) * U[k];
            if (forcing_mid) num += dt * F[k];
            U[k] = num / (1.0 - 0.5 * dt * lam);
        }
        impl_->fft->inverse(U, u);
        return;
    }

    const double dx = grid_.dx();
    const auto n = static_cast<std::size_t>(grid_.n_x);
    auto& lo = impl_->lower;
    auto& di = impl_->diag;
    auto& up = impl_->upper;
    auto& rhs = impl_->rhs;
    double m_corner_l = 0.0, m_corner_u = 0.0;  // periodic wrap entries of M
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_.x(static_cast<int>(i));
        const double ae = coeffs_.a(tm, x) + h_mid * coeffs_.rho(tm, x);
        const double be = coeffs_.b(tm, x) + h_mid * coeffs_.sigma(tm, x);
        const double ce = coeffs_.c(tm, x) + h_mid * coeffs_.nu(tm, x);
        lo[i] = ae / (dx * dx) - be / (2.0 * dx);
        di[i] = -2.0 * ae / (dx * dx) + ce;
        up[i] = ae / (dx * dx) + be / (2.0 * dx);
    }
    const bool periodic = grid_.mode == GridMode::PeriodicSpectral;
    if (periodic) {
        m_corner_l = lo[0];      // row 0 couples to the last point
        m_corner_u = up[n - 1];  // last row couples to the first point
    }
    // rhs = (I + dt/2 M) u + dt * forcing_mid
    for (std::size_t i = 0; i < n; ++i) {
        const double um = (i > 0) ? u[i - 1] : (periodic ? u[n - 1] : 0.0);
        const double uP = (i + 1 < n) ? u[i + 1] : (periodic ? u[0] : 0.0);
        double v = u[i] + 0.5 * dt * (lo[i] * um + di[i] * u[i] + up[i] * uP);
        if (forcing_mid) v += dt * (*forcing_mid)[i];
        rhs[i] = v;
    }
    // Left-hand matrix I - dt/2 M.
    std::vector<double> L(n), D(n), Uo(n);
    for (std::size_t i = 0; i < n; ++i) {
        L[i] = -0.5 * dt * lo[i];
        D[i] = 1.0 - 0.5 * dt * di[i];
        Uo[i] = -0.5 * dt * up[i];
    }
    if (periodic)
        solve_cyclic(std::move(L), std::move(D), std::move(Uo), -0.5 * dt * m_corner_l,
                     -0.5 * dt * m_corner_u, rhs);
    else
        solve_tridiag(L, D, Uo, rhs);
    u = rhs;
}

Trajectory solve_h(const SpatialField& v, const std::function<double(double, double)>& f,
                   const std::function<double(double, double)>& g, const HFunction& h,
                   const CoefficientSet& coeffs, const TimeInterval& interval,
                   const SpatialGrid& grid) {
    grid.validate();
    if (static_cast<int>(v.size()) != grid.n_x)
        throw std::domain_error("solve_h: initial field does not match the grid");
    const double dt = interval.dt();
    // Well-posedness regime: effective diffusion bounded below at all step
    // midpoints (sampled on the grid for x-dependent coefficients).
    for (int j = 0; j < interval.n_t; ++j) {
        const double tm = (j + 0.5) * dt;
        const double hm = h.eval(tm, interval.T);
        const bool xc = coeffs.a.const_in_x() && coeffs.rho.const_in_x();
        const int nsample = xc ? 1 : grid.n_x;
        for (int i = 0; i < nsample; ++i) {
            const double x = xc ? 0.0 : grid.x(i);
            if (coeffs.a(tm, x) + hm * coeffs.rho(tm, x) < 0.5 * coeffs.ellipticity)
                throw RegimeError("solve_h: effective diffusion a + h rho below ellipticity/2 at t=" +
                                      std::to_string(tm),
                                  tm);
        }
    }

    CnStepper stepper(grid, coeffs);
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(interval.n_t) + 1);
    traj.fields.reserve(static_cast<std::size_t>(interval.n_t) + 1);
    SpatialField u = v;
    traj.times.push_back(0.0);
    traj.fields.push_back(u);
    SpatialField forcing;
    for (int j = 0; j < interval.n_t; ++j) {
        const double t = j * dt;
        const double tm = t + 0.5 * dt;
        const double hm = h.eval(tm, interval.T);
        const SpatialField* fp = nullptr;
        if (f || g) {
            forcing.assign(static_cast<std::size_t>(grid.n_x), 0.0);
            for (int i = 0; i < grid.n_x; ++i) {
                const double x = grid.x(i);
                double val = 0.0;
                if (f) val += f(tm, x);
                if (g) val += hm * g(tm, x);
                forcing[static_cast<std::size_t>(i)] = val;
            }
            fp = &forcing;
        }
        stepper.step(u, t, dt, hm, fp);
        traj.times.push_back(interval.time(j + 1));
        traj.fields.push_back(u);
    }
    return traj;
}

SpatialField semigroup_apply(const SpatialField& v, double s, double t,
                             const CoefficientSet& coeffs, const SpatialGrid& grid, double dt) {
    if (s > t) throw std::domain_error("semigroup_apply: requires s <= t");
    if (s == t) return v;
    const int steps = std::max(1, static_cast<int>(std::lround((t - s) / dt)));
    const double step_dt = (t - s) / steps;
    CnStepper stepper(grid, coeffs);
    SpatialField u = v;
    for (int j = 0; j < steps; ++j) stepper.step(u, s + j * step_dt, step_dt, 0.0, nullptr);
    return u;
}

double field_norm_sq(const SpatialField& field, const SpatialGrid& grid, SpatialNormKind kind) {
    if (static_cast<int>(field.size()) != grid.n_x)
        throw std::domain_error("field_norm_sq: field does not match the grid");
    const double dx = grid.dx();
    if (kind == SpatialNormKind::L2) {
        double acc = 0.0;
        for (double v : field) acc += v * v;
        return acc * dx;
    }
    if (grid.mode == GridMode::PeriodicSpectral) {
        RealFFT fft(grid.n_x);
        const int m = fft.modes();
        std::vector<std::complex<double>> U(static_cast<std::size_t>(m));
        fft.forward(field, U);
        const double gamma = (kind == SpatialNormKind::H1) ? 1.0 : -1.0;
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            const double y = grid.wavenumber(j);
            const double w = (j == 0 || (grid.n_x % 2 == 0 && j == m - 1)) ? 1.0 : 2.0;
            acc += w * std::pow(1.0 + y * y, gamma) * std::norm(U[static_cast<std::size_t>(j)]);
        }
        return acc * dx / grid.n_x;
    }
    if (kind == SpatialNormKind::H1) {
        double acc = field_norm_sq(field, grid, SpatialNormKind::L2);
        double prev = 0.0;  // zero Dirichlet ghost on the left
        for (std::size_t i = 0; i < field.size(); ++i) {
            const double d = (field[i] - prev) / dx;
            acc += d * d * dx;
            prev = field[i];
        }
        const double d = (0.0 - prev) / dx;  // right ghost
        acc += d * d * dx;
        return acc;
    }
    // Bounded H^{-1}: <u, (I - Dxx)^{-1} u> with zero Dirichlet conditions.
    const auto n = field.size();
    std::vector<double> lo(n, -1.0 / (dx * dx)), di(n, 1.0 + 2.0 / (dx * dx)),
        up(n, -1.0 / (dx * dx)), rhs(field);
    solve_tridiag(lo, di, up, rhs);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += field[i] * rhs[i];
    return acc * dx;
}

}  // namespace wchaos
