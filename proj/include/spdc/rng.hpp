// Deterministic, platform-independent random number generation for the
// Monte Carlo engine. std::random distributions are implementation-defined,
// so the mapping from bits to samples is spelled out here; the algorithm
// identity "splitmix64/boxmuller/v1" is echoed in output metadata.

#pragma once

#include <cmath>
#include <cstdint>

#include "spdc/common.hpp"

namespace spdc {

inline constexpr char rng_algorithm_id[] = "splitmix64/boxmuller/v1";

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Sub-stream for one deterministic chunk of work.
    static SplitMix64 for_chunk(std::uint64_t seed, std::uint64_t chunk_index) {
        return SplitMix64(mix64(seed + 0x9e3779b97f4a7c15ULL * (chunk_index + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; one value per call, spare cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * constants::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace spdc
