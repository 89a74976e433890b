// SPDX-License-Identifier: Apache-2.0
//
// thzsim - link-level simulator for multi-hop THz beam training
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace thzsim {

// splitmix64 step; also the seed-derivation primitive for substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a substream seed from a master seed and up to three stream ids.
// Rule: feed master, then each id, through successive splitmix64 rounds.
// Streams with distinct (a, b, c) are independent for simulation purposes.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= a;
    h ^= splitmix64(s);
    s ^= b;
    h ^= splitmix64(s);
    s ^= c;
    h ^= splitmix64(s);
    return h;
}

// Random stream with explicit, platform-stable sampling routines.
// All distributions are implemented on top of the raw 64-bit generator so
// results do not depend on standard-library distribution internals.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream substream(std::uint64_t master, std::uint64_t a,
                                  std::uint64_t b = 0, std::uint64_t c = 0) {
        return RandomStream(derive_seed(master, a, b, c));
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in {0, ..., n-1}, unbiased via rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    // Standard normal via Box-Muller (second deviate cached).
    double gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u in (0, 1] so the log is finite.
        const double u = 1.0 - uniform01();
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double phi = 2.0 * M_PI * v;
        cached_ = r * std::sin(phi);
        have_cached_ = true;
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> cgauss(double variance) {
        if (variance <= 0.0) {
            return {0.0, 0.0};
        }
        const double s = std::sqrt(variance / 2.0);
        return {s * gauss(), s * gauss()};
    }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace thzsim
