#ifndef WCHAOS_PROPAGATOR_HPP
#define WCHAOS_PROPAGATOR_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "wchaos/chaos_space.hpp"
#include "wchaos/multiindex.hpp"
#include "wchaos/parabolic1d.hpp"

namespace wchaos {

// One (v, f, g) data triple; null functions mean zero.
struct DeterministicData {
    std::function<double(double)> v;          // initial condition v(x)
    std::function<double(double, double)> f;  // drift forcing f(t, x)
    std::function<double(double, double)> g;  // diffusion forcing g(t, x)
};

// Chaos-expanded data: one (v, f, g) triple per multi-index gamma.
struct ChaosData {
    std::map<MultiIndex, DeterministicData> terms;
};

struct PropagatorConfig {
    int N = 6;
    int K = 16;
    SpatialGrid grid;
    TimeInterval interval;
    CoefficientSet coeffs;
    DeterministicData data;
};

struct SolveOptions {
    // Times at which coefficient fields are stored in the returned series;
    // empty keeps only the final time.  Fields are dropped entirely when
    // store_fields is false (level-norm tabulation only).
    std::vector<double> store_times;
    bool store_fields = true;

    // Times at which per-level norm sums are tabulated.
    std::vector<double> norm_times;
    SpatialNormKind norm_kind = SpatialNormKind::L2;

    // Spectral backend: modes whose initial amplitude is below this
    // fraction of the peak (with zero forcing) carry no mass and are
    // skipped.  Set to 0 to march every mode.
    double mode_cutoff = 1e-30;

    std::size_t memory_budget_bytes = std::size_t(3) << 30;
};

struct LevelNormTable {
    std::vector<double> times;
    // level_norm_sq[ti][n] = sum_{|alpha|=n} ||u_alpha(times[ti])||^2
    std::vector<std::vector<double>> level_norm_sq;
};

struct PropagatorResult {
    ChaosSeries<Trajectory> series;
    LevelNormTable norms;
};

// Solves the lower-triangular propagator system for deterministic data,
// level by level inside each Crank-Nicolson step.
PropagatorResult solve_system(const PropagatorConfig& config, const SolveOptions& options = {});

// Brute-force solve with chaos-expanded data (v_gamma, f_gamma, g_gamma):
// the data of config is ignored.
PropagatorResult solve_system_chaos(const PropagatorConfig& config, const ChaosData& data,
                                    const SolveOptions& options = {});

// Same system solved through the shift identity: one deterministic run per
// data index gamma, re-indexed by alpha -> alpha + gamma with the factorial
// factor; contributions beyond the (N, K) truncation are dropped.
PropagatorResult shift_solve(const PropagatorConfig& config, const ChaosData& data,
                             const SolveOptions& options = {});

// The example equation at a fixed spatial frequency y: scalar propagator
// system with A = B = -y^2, initial value exp(-y^2/2).  Returns the full
// scalar trajectories on the interval's grid.
ChaosSeries<std::vector<double>> fourier_mode_solve(double y, int N, int K,
                                                    const TimeInterval& interval);

// S_n(t) over a stored series (t must be one of the stored times).
double level_norm_sq(const ChaosSeries<Trajectory>& series, int n, double t,
                     const SpatialGrid& grid, SpatialNormKind kind);

}  // namespace wchaos

#endif
