#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace scn {

// splitmix64 finalizer; decorrelates derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic substream seed from a master seed and up to two tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(master ^ mix64(a + 0x2545f4914f6cdd1dull)) ^ mix64(b));
}

// Seeded random stream with explicit variate transforms. The transforms are
// written out (instead of std::*_distribution) so sequences are reproducible
// across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // uniform index in [0, n)
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("RandomStream::index: n must be positive");
        std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    // Exponential with the given rate; rate 0 yields +infinity.
    double exponential(double rate) {
        if (rate < 0.0) throw std::invalid_argument("RandomStream::exponential: negative rate");
        if (rate == 0.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform01()) / rate;
    }

    // Poisson by CDF inversion. Exact and deterministic; fine for the means
    // used here (well below the exp(-mean) underflow regime).
    long poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("RandomStream::poisson: negative mean");
        if (mean == 0.0) return 0;
        if (mean > 700.0) throw std::invalid_argument("RandomStream::poisson: mean too large for inversion");
        const double u = uniform01();
        double p = std::exp(-mean);
        double cdf = p;
        long k = 0;
        const long cap = static_cast<long>(mean + 12.0 * std::sqrt(mean) + 60.0);
        while (u > cdf && k < cap) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace scn
