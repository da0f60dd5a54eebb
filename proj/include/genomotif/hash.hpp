#pragma once

#include <cstdint>
#include <limits>

namespace genomotif {

// SplitMix64 finalizer. Portable and stable across platforms; k-mer ownership,
// Bloom probes and sketch values are all derived from it.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded hash of a packed k-mer value.
constexpr std::uint64_t hash_packed(std::uint64_t packed, std::uint64_t seed) noexcept {
    return mix64(packed ^ mix64(seed));
}

// SplitMix64 generator (64-bit state). Satisfies UniformRandomBitGenerator, but
// the helpers below are used instead of <random> distributions so that every
// derived draw is reproducible independent of the standard library.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 1) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) by rejection; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold) return r % bound;
        }
    }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

private:
    std::uint64_t state_;
};

}  // namespace genomotif
