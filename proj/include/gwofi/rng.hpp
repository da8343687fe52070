#ifndef GWOFI_RNG_HPP
#define GWOFI_RNG_HPP

#include <cstdint>
#include <vector>

namespace gwofi {

// All randomness in the project flows through these primitives so that runs
// are reproducible bit-for-bit across platforms and thread schedules. The
// standard library distributions are implementation-defined and are not used.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Chained mix of up to four indices into one substream value. Used for
// counter-based draws keyed by (iteration, wolf, dimension, channel):
// no shared stream state, so parallel evaluation cannot reorder draws.
inline constexpr std::uint64_t mix_indices(std::uint64_t seed, std::uint64_t a,
                                           std::uint64_t b = 0, std::uint64_t c = 0,
                                           std::uint64_t d = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    h = splitmix64(h ^ d);
    return h;
}

// 53-bit mantissa to a double in [0, 1).
inline constexpr double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t a,
                                        std::uint64_t b = 0, std::uint64_t c = 0,
                                        std::uint64_t d = 0) {
    return to_unit(mix_indices(seed, a, b, c, d));
}

// Small sequential generator for shuffles and synthetic data.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return to_unit(next()); }

    // Uniform integer in [0, n). Multiply-shift keeps the mapping portable.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace gwofi

#endif
