#ifndef WCHAOS_PARABOLIC1D_HPP
#define WCHAOS_PARABOLIC1D_HPP

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wchaos/cm_basis.hpp"

namespace wchaos {

enum class GridMode { PeriodicSpectral, BoundedFiniteDifference };

// Uniform grid on [-L, L].  Periodic mode: n_x points, x_i = -L + i dx,
// dx = 2L/n_x.  Bounded mode: n_x interior points with zero Dirichlet
// values at +-L, dx = 2L/(n_x+1).
struct SpatialGrid {
    double L = 20.0;
    int n_x = 1024;
    GridMode mode = GridMode::PeriodicSpectral;

    double dx() const {
        return mode == GridMode::PeriodicSpectral ? 2.0 * L / n_x : 2.0 * L / (n_x + 1);
    }
    double x(int i) const {
        return mode == GridMode::PeriodicSpectral ? -L + i * dx() : -L + (i + 1) * dx();
    }
    // Spectral wavenumber of half-spectrum mode j (periodic mode only).
    double wavenumber(int j) const;
    void validate() const;
    bool operator==(const SpatialGrid& o) const {
        return L == o.L && n_x == o.n_x && mode == o.mode;
    }
};

using SpatialField = std::vector<double>;

struct Trajectory {
    std::vector<double> times;
    std::vector<SpatialField> fields;

    const SpatialField& at_time(double t) const;  // exact stored time (1e-9 slack)
    const SpatialField& final() const { return fields.back(); }
};

// One operator coefficient: a constant or a function of (t, x).
class Coefficient {
public:
    Coefficient() : value_(0.0), const_in_x_(true), const_in_t_(true) {}
    Coefficient(double v) : value_(v), const_in_x_(true), const_in_t_(true) {}
    Coefficient(std::function<double(double, double)> fn, bool const_in_x, bool const_in_t)
        : fn_(std::move(fn)), const_in_x_(const_in_x), const_in_t_(const_in_t) {}

    double operator()(double t, double x) const { return fn_ ? fn_(t, x) : value_; }
    bool const_in_x() const { return const_in_x_; }
    bool const_in_t() const { return const_in_t_; }

private:
    std::function<double(double, double)> fn_;
    double value_ = 0.0;
    bool const_in_x_;
    bool const_in_t_;
};

// The six scalar coefficients of du = (A u + f)dt + (B u + g)dW with
// A = a Dxx + b Dx + c and B = rho Dxx + sigma Dx + nu.
struct CoefficientSet {
    Coefficient a{1.0}, b{0.0}, c{0.0};
    Coefficient rho{0.0}, sigma{0.0}, nu{0.0};
    double bound_C0 = 1.0;     // sup bound on all six coefficients
    double ellipticity = 1.0;  // delta with a(t,x) >= delta > 0

    bool x_independent() const {
        return a.const_in_x() && b.const_in_x() && c.const_in_x() && rho.const_in_x() &&
               sigma.const_in_x() && nu.const_in_x();
    }
    // The paper example: a = rho = 1, everything else zero.
    static CoefficientSet heat_example();
};

enum class OperatorKind { Drift, Diffusion };  // A or B

enum class SpatialNormKind { L2, H1, Hm1 };

struct RegimeError : std::runtime_error {
    double time;
    RegimeError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A u or B u at time t: spectral derivatives in periodic mode, second-order
// central differences with zero ghost values in bounded mode.
SpatialField apply_operator(const SpatialField& field, OperatorKind which,
                            const CoefficientSet& coeffs, double t, const SpatialGrid& grid);

// Discrete spatial norms.  Periodic H^{+-1} is spectral, (1+y^2)^{+-1}
// weights; bounded H^1 adds the forward-difference gradient and bounded
// H^{-1} inverts I - Dxx.
double field_norm_sq(const SpatialField& field, const SpatialGrid& grid, SpatialNormKind kind);

inline double field_norm(const SpatialField& f, const SpatialGrid& g, SpatialNormKind k) {
    return std::sqrt(field_norm_sq(f, g, k));
}

// Crank-Nicolson stepper for d/dt u = (A + h(t) B) u + forcing.  Builds the
// tridiagonal (bounded / variable-coefficient periodic) or diagonal spectral
// (periodic, x-independent coefficients) system at the step midpoint.
class CnStepper {
public:
    CnStepper(SpatialGrid grid, CoefficientSet coeffs);
    ~CnStepper();
    CnStepper(CnStepper&&) noexcept;

    // One step from t to t + dt; h_mid and forcing_mid are evaluated at
    // t + dt/2 by the caller.  forcing_mid may be null.
    void step(SpatialField& u, double t, double dt, double h_mid,
              const SpatialField* forcing_mid);

    const SpatialGrid& grid() const { return grid_; }
    bool spectral() const;

private:
    struct Impl;
    SpatialGrid grid_;
    CoefficientSet coeffs_;
    std::unique_ptr<Impl> impl_;
};

// Solves du_h = (A + h B) u_h + f + h g, u_h(0) = v, on the interval's time
// grid; refuses (RegimeError) if the effective diffusion a + h rho drops
// below ellipticity/2 at any step midpoint.
Trajectory solve_h(const SpatialField& v, const std::function<double(double, double)>& f,
                   const std::function<double(double, double)>& g, const HFunction& h,
                   const CoefficientSet& coeffs, const TimeInterval& interval,
                   const SpatialGrid& grid);

// Phi_{s,t} v: the drift semigroup, i.e. solve_h with h = 0, f = g = 0,
// run from s to t in steps of size dt.
SpatialField semigroup_apply(const SpatialField& v, double s, double t,
                             const CoefficientSet& coeffs, const SpatialGrid& grid, double dt);

// Samples a scalar function of x on the grid (nullptr-safe: zero field).
SpatialField sample_field(const std::function<double(double)>& fn, const SpatialGrid& grid);
SpatialField sample_field_t(const std::function<double(double, double)>& fn, double t,
                            const SpatialGrid& grid);

}  // namespace wchaos

#endif
