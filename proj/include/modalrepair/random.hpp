#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// The standard distributions are implementation-defined, so draws go through
// these helpers to keep outputs byte-identical across standard libraries.

namespace modalrepair::random {

/// splitmix64 finalizer; a good 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the value at `counter` depends only on (seed, counter).
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) {
    return mix64(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard normal draw for entry `counter` (Box-Muller on two counter draws).
inline double normal_at(std::uint64_t seed, std::uint64_t counter) {
    const double u1 = 1.0 - to_unit(counter_bits(seed, 2 * counter));  // (0, 1]
    const double u2 = to_unit(counter_bits(seed, 2 * counter + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Sequential generator with unbiased bounded integers.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= limit) return r % bound;
        }
    }

    double uniform() { return to_unit(next()); }

private:
    std::uint64_t state_;
};

}  // namespace modalrepair::random
