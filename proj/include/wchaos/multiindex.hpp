#ifndef WCHAOS_MULTIINDEX_HPP
#define WCHAOS_MULTIINDEX_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wchaos {

// Finitely supported sequence of non-negative integers.  Entries are kept
// as sorted (basis index k >= 1, multiplicity >= 1) pairs; zeros are never
// stored, so the zero index has an empty entry list.
class MultiIndex {
public:
    using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (k, alpha_k)

    MultiIndex() = default;
    explicit MultiIndex(std::vector<Entry> entries);

    static MultiIndex zero() { return MultiIndex{}; }
    static MultiIndex unit(std::uint32_t k);  // epsilon_k

    // Builds the index in which k appears once per occurrence in the
    // (not necessarily sorted) list.
    static MultiIndex from_characteristic_set(const std::vector<std::uint32_t>& set);

    std::uint32_t operator[](std::uint32_t k) const;  // alpha_k (0 if absent)
    const std::vector<Entry>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    std::uint32_t max_support() const;  // largest k with alpha_k > 0 (0 for zero index)

    std::uint64_t order() const;  // |alpha|

    MultiIndex plus_unit(std::uint32_t k) const;   // alpha + epsilon_k
    MultiIndex minus_unit(std::uint32_t k) const;  // alpha - epsilon_k; requires alpha_k >= 1
    MultiIndex plus(const MultiIndex& other) const;

    bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
    bool operator!=(const MultiIndex& o) const { return !(*this == o); }
    bool operator<(const MultiIndex& o) const;  // by order, then lexicographic char. set

    // Non-decreasing list i_1 <= ... <= i_n, n = |alpha|, where k appears
    // alpha_k times.
    std::vector<std::uint32_t> characteristic_set() const;

    // Comma-separated characteristic set, empty string for the zero index.
    std::string to_string() const;

private:
    std::vector<Entry> entries_;
};

// ln(alpha!) = ln prod_k alpha_k!
double log_factorial(const MultiIndex& alpha);

// Exact integer alpha!; requires |alpha| <= 20 (overflow guard), intended
// for small test instances.
std::uint64_t factorial_exact(const MultiIndex& alpha);

// ln( 2^{p|alpha|} * prod_k k^{2 q alpha_k} / |alpha|! )
double weight_log(const MultiIndex& alpha, double p, double q);

// All alpha with |alpha| <= N and support in {1..K}, grouped by increasing
// |alpha| and, within a level, lexicographic in the characteristic set.
// Total count is binomial(N+K, K).
std::vector<MultiIndex> enumerate(std::uint32_t N, std::uint32_t K);

// Offsets of each level inside enumerate(N, K): result[n] is the position
// of the first index of order n, result[N+1] the total count.
std::vector<std::size_t> level_offsets(const std::vector<MultiIndex>& indices,
                                       std::uint32_t N);

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& a) const;
};

}  // namespace wchaos

#endif
