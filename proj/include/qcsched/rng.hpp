#pragma once

#include <cmath>
#include <cstdint>

namespace qcsched {

// Counter-friendly PRNG (splitmix64). Used everywhere instead of
// std::mt19937 so that results are identical no matter how trials are
// split across worker threads: a stream is cheap to construct from a
// mixed (seed, index, ...) key.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }
};

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return s.next();
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

// Box-Muller with one cached deviate.
struct Gaussian {
    SplitMix64 rng;
    double cached = 0.0;
    bool has_cached = false;

    explicit Gaussian(std::uint64_t seed) : rng(seed) {}

    double next() {
        if (has_cached) {
            has_cached = false;
            return cached;
        }
        double u1 = rng.next_double();
        while (u1 <= 0.0) u1 = rng.next_double();
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached = r * std::sin(a);
        has_cached = true;
        return r * std::cos(a);
    }
};

}  // namespace qcsched
