#ifndef TBRESET_RNG_HPP
#define TBRESET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace tbr::rng {

/// splitmix64: 64-bit counter-hash generator (Steele, Lea & Flood).
/// Deterministic given the seed; per-trajectory streams are seeded with
/// master_seed + trajectory_index.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Inverse-CDF exponential: tau = -ln(1 - u) / lambda, finite for all u.
    double exponential(double lambda) { return -std::log1p(-uniform01()) / lambda; }

    static constexpr const char* kAlgorithm = "splitmix64";

private:
    std::uint64_t state_;
};

} // namespace tbr::rng

#endif
