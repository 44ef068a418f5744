#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace kcgml {

// Deterministic, platform-independent RNG. Standard-library distributions are
// implementation-defined, so every sampling step here is spelled out; streams
// derived from (seed, stage, a, b) make parallel and serial runs identical.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    // splitmix64
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bias-free via rejection
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = bound * (~0ull / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Knuth's product method; fine for the small rates used here
    std::uint64_t next_poisson(double lambda) {
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace detail

// Named stream derivation: hash the stage label and indices into the seed so
// that e.g. (seed, "n2v-walk", node, walk) always yields the same stream.
inline Rng derive_rng(std::uint64_t seed, std::string_view stage,
                      std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a over the stage label
    for (char c : stage) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    std::uint64_t s = detail::mix64(seed ^ h);
    s = detail::mix64(s ^ (a + 0x9e3779b97f4a7c15ull));
    s = detail::mix64(s ^ (b + 0x7f4a7c159e3779b9ull));
    return Rng(s);
}

} // namespace kcgml
