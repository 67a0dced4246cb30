#include "wchaos/chaos_space.hpp"

#include <cmath>

namespace wchaos {

double hnorm_sq(const HFunction& h, double s) {
    double acc = 0.0;
    for (int k = 1; k <= h.K(); ++k) {
        const double hk = h.coeffs[static_cast<std::size_t>(k - 1)];
        acc += std::pow(static_cast<double>(k), 2.0 * s) * hk * hk;
    }
    return acc;
}

bool eh_member(const HFunction& h, const WeightPair& w) {
    return hnorm_sq(h, -w.q) < std::pow(2.0, w.p);
}

}  // namespace wchaos
