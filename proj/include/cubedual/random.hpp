#pragma once
// Deterministic pseudo-random data for the verification suites. SplitMix64
// with integers drawn by modulo: trivially biased, entirely adequate for test
// images, and bit-for-bit reproducible across platforms, which standard
// library distributions are not.

#include <cstdint>
#include <utility>
#include <vector>

#include "cubedual/image.hpp"

namespace cubedual {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform-ish integer in [lo, hi].
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

private:
    std::uint64_t state_;
};

/// Stable per-trial seed derived from a base seed.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
    SplitMix64 mix(base + 0x632be59bd9b4e019ull * (trial + 1));
    return mix.next();
}

inline GrayscaleImage random_image(SplitMix64& rng, std::vector<int> extents, int lo, int hi) {
    Index total = 1;
    for (int e : extents) total *= e;
    std::vector<Real> values(static_cast<std::size_t>(total));
    for (Real& v : values) v = static_cast<Real>(rng.next_in(lo, hi));
    return GrayscaleImage(std::move(extents), std::move(values));
}

}  // namespace cubedual
