#ifndef WCHAOS_RNG_HPP
#define WCHAOS_RNG_HPP

#include <cstdint>
#include <random>

namespace wchaos {

// splitmix64 scrambler; distinct inputs give statistically independent
// stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic Gaussian stream.  Box-Muller on top of mt19937_64 so that
// results do not depend on the standard library's normal_distribution.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    // Substream for an independent block of work.
    static GaussianRng for_block(std::uint64_t seed, std::uint64_t block) {
        return GaussianRng(splitmix64(seed) ^ splitmix64(block + 0x632be59bd9b4e019ull));
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double uniform() {  // in [0, 1)
        return (eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace wchaos

#endif
