#include "nmsse/random.hpp"

#include <cmath>

namespace nmsse {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(splitmix64(splitmix64(master_seed) ^ (index * 0xd1b54a32d192ed03ULL + 1)));
}

double RandomStream::uniform() {
    // (k + 0.5) / 2^53 never hits 0 or 1
    const auto k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

double RandomStream::normal(double variance) { return std::sqrt(variance) * normal(); }

}  // namespace nmsse
