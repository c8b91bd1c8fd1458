#pragma once

#include <cstdint>
#include <random>

namespace aggsim {

// splitmix64 step; used to mix seeds into well-separated substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic generator wrapper. mt19937_64 has a standardized sequence,
// and all mappings below are explicit, so identical seeds give identical
// streams on every platform. Never use std::*_distribution here: their
// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed, 0)) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : gen_(mix(seed, stream)) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform01() < p; exact at p = 0 and p = 1.
    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n). Multiply-shift map (bias < n / 2^64).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s += stream * 0x9e3779b97f4a7c15ULL;
        std::uint64_t b = splitmix64(s);
        return a ^ (b + 0x632be59bd9b4e019ULL);
    }

    std::mt19937_64 gen_;
};

}  // namespace aggsim
