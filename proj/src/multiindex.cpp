#include "wchaos/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wchaos {

MultiIndex::MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    for (const auto& [k, m] : entries_) {
        if (k == 0) throw std::invalid_argument("MultiIndex: basis index must be >= 1");
        if (m == 0) throw std::invalid_argument("MultiIndex: stored multiplicity must be >= 1");
    }
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].first == entries_[i - 1].first)
            throw std::invalid_argument("MultiIndex: duplicate basis index");
}

MultiIndex MultiIndex::unit(std::uint32_t k) {
    return MultiIndex{{{k, 1u}}};
}

MultiIndex MultiIndex::from_characteristic_set(const std::vector<std::uint32_t>& set) {
    std::vector<std::uint32_t> s(set);
    std::sort(s.begin(), s.end());
    std::vector<Entry> e;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        e.push_back({s[i], static_cast<std::uint32_t>(j - i)});
        i = j;
    }
    return MultiIndex{std::move(e)};
}

std::uint32_t MultiIndex::operator[](std::uint32_t k) const {
    for (const auto& [kk, m] : entries_)
        if (kk == k) return m;
    return 0;
}

std::uint32_t MultiIndex::max_support() const {
    return entries_.empty() ? 0u : entries_.back().first;
}

std::uint64_t MultiIndex::order() const {
    std::uint64_t n = 0;
    for (const auto& [k, m] : entries_) n += m;
    return n;
}

MultiIndex MultiIndex::plus_unit(std::uint32_t k) const {
    MultiIndex r(*this);
    for (auto& [kk, m] : r.entries_)
        if (kk == k) {
            ++m;
            return r;
        }
    r.entries_.push_back({k, 1u});
    std::sort(r.entries_.begin(), r.entries_.end());
    return r;
}

MultiIndex MultiIndex::minus_unit(std::uint32_t k) const {
    MultiIndex r(*this);
    for (std::size_t i = 0; i < r.entries_.size(); ++i) {
        if (r.entries_[i].first == k) {
            if (r.entries_[i].second == 1)
                r.entries_.erase(r.entries_.begin() + static_cast<std::ptrdiff_t>(i));
            else
                --r.entries_[i].second;
            return r;
        }
    }
    throw std::invalid_argument("MultiIndex::minus_unit: alpha_k is zero");
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
    MultiIndex r(*this);
    for (const auto& [k, m] : other.entries_)
        for (std::uint32_t i = 0; i < m; ++i) r = r.plus_unit(k);
    return r;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
    const auto na = order(), nb = o.order();
    if (na != nb) return na < nb;
    return characteristic_set() < o.characteristic_set();
}

std::vector<std::uint32_t> MultiIndex::characteristic_set() const {
    std::vector<std::uint32_t> s;
    s.reserve(order());
    for (const auto& [k, m] : entries_)
        for (std::uint32_t i = 0; i < m; ++i) s.push_back(k);
    return s;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    const auto s = characteristic_set();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    return os.str();
}

double log_factorial(const MultiIndex& alpha) {
    double r = 0.0;
    for (const auto& [k, m] : alpha.entries()) r += std::lgamma(static_cast<double>(m) + 1.0);
    return r;
}

std::uint64_t factorial_exact(const MultiIndex& alpha) {
    if (alpha.order() > 20)
        throw std::invalid_argument("factorial_exact: |alpha| > 20 overflows 64 bits");
    std::uint64_t r = 1;
    for (const auto& [k, m] : alpha.entries())
        for (std::uint64_t i = 2; i <= m; ++i) r *= i;
    return r;
}

double weight_log(const MultiIndex& alpha, double p, double q) {
    const double n = static_cast<double>(alpha.order());
    double r = p * n * std::log(2.0) - std::lgamma(n + 1.0);
    for (const auto& [k, m] : alpha.entries())
        r += 2.0 * q * static_cast<double>(m) * std::log(static_cast<double>(k));
    return r;
}

namespace {

void emit_level(std::uint32_t n, std::uint32_t K, std::uint32_t min_k,
                std::vector<std::uint32_t>& set, std::vector<MultiIndex>& out) {
    if (n == 0) {
        out.push_back(MultiIndex::from_characteristic_set(set));
        return;
    }
    for (std::uint32_t k = min_k; k <= K; ++k) {
        set.push_back(k);
        emit_level(n - 1, K, k, set, out);
        set.pop_back();
    }
}

}  // namespace

std::vector<MultiIndex> enumerate(std::uint32_t N, std::uint32_t K) {
    if (K < 1) throw std::invalid_argument("enumerate: K must be >= 1");
    std::vector<MultiIndex> out;
    std::vector<std::uint32_t> set;
    for (std::uint32_t n = 0; n <= N; ++n) emit_level(n, K, 1, set, out);
    return out;
}

std::vector<std::size_t> level_offsets(const std::vector<MultiIndex>& indices,
                                       std::uint32_t N) {
    std::vector<std::size_t> off(N + 2, indices.size());
    std::uint64_t prev = 0;
    off[0] = 0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto n = indices[i].order();
        if (n != prev) {
            for (std::uint64_t m = prev + 1; m <= n; ++m) off[m] = i;
            prev = n;
        }
    }
    for (std::uint64_t m = prev + 1; m <= N + 1; ++m) off[m] = indices.size();
    return off;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& [k, m] : a.entries()) {
        h = (h ^ k) * 0x100000001b3ull;
        h = (h ^ m) * 0x100000001b3ull;
    }
    return h;
}

}  // namespace wchaos
