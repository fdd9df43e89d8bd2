#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace wpsn {

// SplitMix64 step; used to whiten seeds and derive per-index substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a stream id from (seed, index) so substreams are independent and
// schedule-order does not matter.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= index + 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    return mix_seed(mix_seed(seed, i), j);
}

// Deterministic random stream. mt19937_64 core with explicit output mapping
// (the standard distributions are implementation-defined, so uniform and
// normal draws are mapped by hand to keep results identical across toolchains).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}
    RandomStream(std::uint64_t seed, std::uint64_t index) : eng_(mix_seed(seed, index)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex normal CN(0,1), E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double s = 0.70710678118654752440;  // 1/sqrt(2)
        return {s * normal(), s * normal()};
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wpsn
