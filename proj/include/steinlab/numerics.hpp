#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace steinlab {

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Largest double strictly below 1; radii that round to 1 are clamped here.
inline double max_radius_below_one() {
    return std::nextafter(1.0, 0.0);
}

// Pairwise (tree) summation. Order of the input determines the result bits,
// so callers that need permutation invariance sort first.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double acc = 0.0;
        for (double x : xs) acc += x;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// Canonical sum: sorts a scratch copy so any permutation of the same
// multiset of terms produces bit-identical output.
inline double sorted_pairwise_sum(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return pairwise_sum(xs);
}

// (v + d)^p - v^p for v, d >= 0, stable when d << v.  Used by the
// criterion-sum increment accumulation; a plain difference of powers
// saturates at one ulp of v^p.
inline double power_increment(double v, double d, double p) {
    if (d <= 0.0) return 0.0;
    if (v <= 0.0) return std::pow(d, p);
    if (p == 1.0) return d;
    if (p == 2.0) return d * (2.0 * v + d);
    const double z = p * std::log1p(d / v);
    if (z > 700.0) return std::pow(v + d, p);  // pow overflow path, no cancellation anyway
    return std::pow(v, p) * std::expm1(z);
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y <= -kPi) y = kPi;  // remainder returns [-pi, pi]; fold the closed end
    return y;
}

// Wrap to [0, 2*pi).
inline double wrap_angle_positive(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    if (y >= kTwoPi) y = 0.0;
    return y;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace steinlab
