#pragma once

#include <cstdint>
#include <random>

namespace nmsse {

// Per-trajectory random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Gaussian variates use the Marsaglia polar method implemented here
// (not std::normal_distribution, whose algorithm is library-specific), so a
// given seed yields the same numbers on every platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Stream for trajectory `index` of a run seeded with `master_seed`. The
    // derivation is a pure function of both values, so results do not depend
    // on which worker executes the trajectory.
    static RandomStream for_trajectory(std::uint64_t master_seed, std::uint64_t index);

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();

    // Standard normal, mean 0 and variance 1.
    double normal();

    // Real Gaussian with the given variance.
    double normal(double variance);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// SplitMix64 finalizer; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace nmsse
