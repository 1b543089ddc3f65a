#pragma once

#include <cstdint>
#include <random>

namespace setmdp {

/// SplitMix64 step; used to derive independent per-seed streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * mt19937_64 seeded through SplitMix64. The engine output is fully specified by
 * the standard; the bounded draws below are hand-written so that sequences do
 * not depend on the library's distribution implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t state = seed ^ (stream * 0xD1B54A32D192ED03ULL);
        engine_.seed(splitmix64(state));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n) by rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - n) % n;
        for (;;) {
            const std::uint64_t x = engine_();
            if (limit == 0 || x < limit) return x % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

} // namespace setmdp
