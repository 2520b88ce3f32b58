#pragma once

#include <cmath>
#include <cstdint>

#include "steinlab/numerics.hpp"

namespace steinlab {

// Counter-based generator (splitmix64 finalizer over key + i*gamma).
// Draw i depends only on (key, i), so parallel schedules and evaluation
// order cannot change any stream; that is what makes the whole artifact
// reproducible to the byte across thread counts.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t finalize(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    // Independent substream id; used to split one master seed into
    // per-task streams (documented in the README).
    static std::uint64_t derive(std::uint64_t key, std::uint64_t index) {
        return finalize((key ^ 0x6a09e667f3bcc909ULL) + kGamma * (index + 1));
    }

    std::uint64_t bits(std::uint64_t i) const {
        return finalize(key_ + kGamma * (i + 1));
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double u01(std::uint64_t i) const {
        return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
    }

    // Uniform angle in [0, 2*pi).
    double angle(std::uint64_t i) const { return kTwoPi * u01(i); }

    // Exponential with the given rate; uses -log1p(-u) so u=0 is safe.
    double exponential(std::uint64_t i, double rate) const {
        return -std::log1p(-u01(i)) / rate;
    }

    // Standard normal via Box-Muller; consumes counters 2i and 2i+1.
    double normal(std::uint64_t i) const {
        const double u1 = (static_cast<double>(bits(2 * i) >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = u01(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    double lognormal(std::uint64_t i, double mu, double sigma) const {
        return std::exp(mu + sigma * normal(i));
    }

    std::uint64_t key() const { return key_; }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
};

}  // namespace steinlab
