#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lzwave {

/// Deterministic random stream used throughout the simulators and learners.
///
/// Wraps std::mt19937_64 (whose raw output is fully specified by the
/// standard) but implements its own integer, real and normal draws, so the
/// produced byte streams do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_seed(seed), m_engine(splitmix64(seed)) {}

    std::uint64_t seed() const { return m_seed; }

    std::uint64_t next_u64() { return m_engine(); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        // multiply-high mapping; bias is O(n / 2^64)
        unsigned __int128 wide = static_cast<unsigned __int128>(next_u64());
        return static_cast<int>((wide * static_cast<unsigned __int128>(n)) >> 64);
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, caching the second deviate.
    double normal() {
        if (m_has_spare) {
            m_has_spare = false;
            return m_spare;
        }
        double u1 = uniform_real();
        double u2 = uniform_real();
        while (u1 <= 0.0) u1 = uniform_real();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        m_spare = radius * std::sin(angle);
        m_has_spare = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Exponential with unit mean.
    double exponential() {
        double u = uniform_real();
        while (u >= 1.0) u = uniform_real();
        return -std::log1p(-u);
    }

    /// Independent stream derived from this one's seed and a fixed tag.
    /// Forking does not consume state from the parent.
    Rng fork(std::uint64_t tag) const {
        return Rng(splitmix64(m_seed + 0x9e3779b97f4a7c15ULL * (tag + 1)));
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t m_seed;
    std::mt19937_64 m_engine;
    double m_spare = 0.0;
    bool m_has_spare = false;
};

}  // namespace lzwave
