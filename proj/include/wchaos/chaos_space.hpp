#ifndef WCHAOS_CHAOS_SPACE_HPP
#define WCHAOS_CHAOS_SPACE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "wchaos/cm_basis.hpp"
#include "wchaos/multiindex.hpp"

namespace wchaos {

// Weight exponents (p, q) of the space (L)_{p,q}.  Negative values enlarge
// the space; that is the regime where full-second-order solutions live.
struct WeightPair {
    double p = 0.0;
    double q = 0.0;
};

// Chaos series: map from multi-index to a coefficient value V (scalar,
// spatial field, or trajectory), truncated to |alpha| <= N, support <= K.
template <class V>
class ChaosSeries {
public:
    ChaosSeries() = default;
    ChaosSeries(int N, int K) : N_(N), K_(K) {}

    int N() const { return N_; }
    int K() const { return K_; }

    void set(const MultiIndex& alpha, V value) {
        if (static_cast<int>(alpha.order()) > N_ || static_cast<int>(alpha.max_support()) > K_)
            throw std::invalid_argument("ChaosSeries::set: index outside the (N, K) truncation");
        coeffs_[alpha] = std::move(value);
    }

    bool contains(const MultiIndex& alpha) const { return coeffs_.count(alpha) != 0; }

    const V& at(const MultiIndex& alpha) const {
        auto it = coeffs_.find(alpha);
        if (it == coeffs_.end())
            throw std::out_of_range("ChaosSeries::at: no coefficient stored for this index");
        return it->second;
    }

    // Ordered by (|alpha|, characteristic set): iteration is level by level.
    const std::map<MultiIndex, V>& coefficients() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

private:
    int N_ = 0;
    int K_ = 1;
    std::map<MultiIndex, V> coeffs_;
};

// || sum eta_alpha xi_alpha ||^2_{p,q;X} = sum_alpha 2^{p|a|} N^{2qa} / |a|! * ||eta_alpha||^2_X
template <class V>
double weighted_norm_sq(const ChaosSeries<V>& series, const WeightPair& w,
                        const std::function<double(const V&)>& spatial_norm_sq) {
    double acc = 0.0;
    for (const auto& [alpha, value] : series.coefficients())
        acc += std::exp(weight_log(alpha, w.p, w.q)) * spatial_norm_sq(value);
    return acc;
}

// E || sum eta_alpha xi_alpha ||^2_X = sum_alpha ||eta_alpha||^2_X (Parseval).
template <class V>
double expectation_norm_sq(const ChaosSeries<V>& series,
                           const std::function<double(const V&)>& spatial_norm_sq) {
    double acc = 0.0;
    for (const auto& [alpha, value] : series.coefficients()) acc += spatial_norm_sq(value);
    return acc;
}

namespace detail {

inline void axpy(double a, const double& x, double& y) { y += a * x; }

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    if (y.empty()) y.assign(x.size(), 0.0);
    if (y.size() != x.size())
        throw std::invalid_argument("chaos series: coefficient shapes differ");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

template <class V>
void axpy(double a, const std::vector<V>& x, std::vector<V>& y) {
    if (y.empty()) y.resize(x.size());
    if (y.size() != x.size())
        throw std::invalid_argument("chaos series: coefficient shapes differ");
    for (std::size_t i = 0; i < x.size(); ++i) axpy(a, x[i], y[i]);
}

}  // namespace detail

// S-transform evaluation u_h = sum_alpha u_alpha h^alpha / sqrt(alpha!),
// summed in increasing |alpha| order (the map order guarantees it).
template <class V>
V s_evaluate(const ChaosSeries<V>& series, const HFunction& h) {
    V out{};
    for (const auto& [alpha, value] : series.coefficients()) {
        double c = std::exp(-0.5 * log_factorial(alpha));
        for (const auto& [k, m] : alpha.entries())
            c *= std::pow(h.coeff(static_cast<int>(k)), static_cast<double>(m));
        if (c != 0.0) detail::axpy(c, value, out);
    }
    return out;
}

// ||h||_s^2 = sum_k k^{2s} h_k^2 under the eigenvalue convention
// Lambda^{s/2} m_k = k^s m_k.
double hnorm_sq(const HFunction& h, double s);

// Membership test for the stochastic exponential: E_h in (L)^{p,q} iff
// ||h||_{-q}^2 < 2^p (strict).
bool eh_member(const HFunction& h, const WeightPair& w);

}  // namespace wchaos

#endif
