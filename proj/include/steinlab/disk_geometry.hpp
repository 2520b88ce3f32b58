#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "steinlab/numerics.hpp"

namespace steinlab {

// Point of the open unit disk. Construction validates |z| < 1.
struct DiskPoint {
    double re = 0.0;
    double im = 0.0;

    DiskPoint() = default;
    DiskPoint(double re_, double im_) : re(re_), im(im_) {
        if (!(re * re + im * im < 1.0))
            throw std::invalid_argument("DiskPoint: |z| must be < 1");
    }

    // Polar constructor; nudges inward if rounding lands the point on the
    // circle (happens for radii within a few ulp of 1).
    static DiskPoint from_polar(double r, double theta) {
        if (!(r >= 0.0) || !(r < 1.0))
            throw std::invalid_argument("DiskPoint: radius must be in [0, 1)");
        double x = r * std::cos(theta);
        double y = r * std::sin(theta);
        while (x * x + y * y >= 1.0) {
            x *= (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
            y *= (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
        }
        DiskPoint p;
        p.re = x;
        p.im = y;
        return p;
    }

    std::complex<double> c() const { return {re, im}; }
    double abs() const { return std::hypot(re, im); }
    double arg() const { return std::atan2(im, re); }
    // 1 - |z|; absolute accuracy ~1e-16, callers with exact gap data
    // (radius profiles) should prefer the polar-domain functions.
    double gap() const { return 1.0 - abs(); }

    bool operator==(const DiskPoint&) const = default;
};

// rho(a, b) = |a - b| / |1 - conj(a) b|, the Mobius-invariant metric.
inline double pseudo_distance(const DiskPoint& a, const DiskPoint& b) {
    const auto za = a.c(), zb = b.c();
    const double num = std::abs(za - zb);
    if (num == 0.0) return 0.0;
    const double den = std::abs(1.0 - std::conj(za) * zb);
    const double rho = num / den;
    return rho < 1.0 ? rho : max_radius_below_one();
}

namespace detail {

// Shared polar-form pieces: a, b are boundary gaps (1-r, 1-s) in [0, 1],
// dtheta the angle difference. den = |1 - conj(za) zb|^2.
struct RhoParts {
    double den;       // (1-rs)^2 + 4 r s sin^2(dt/2)
    double num_dist;  // (r-s)^2 + 4 r s sin^2(dt/2)  = |a-b|^2
    double num_comp;  // (1-r^2)(1-s^2)               = den - num_dist
};

inline RhoParts rho_parts_polar(double a, double b, double dtheta) {
    const double r = 1.0 - a, s = 1.0 - b;
    const double sn = std::sin(0.5 * dtheta);
    const double cross = 4.0 * r * s * sn * sn;
    RhoParts parts;
    parts.den = (a + b - a * b) * (a + b - a * b) + cross;  // 1-rs = a+b-ab
    parts.num_dist = (a - b) * (a - b) + cross;
    parts.num_comp = (a * (2.0 - a)) * (b * (2.0 - b));
    return parts;
}

}  // namespace detail

// log(1/rho) for points given as (gap, angle) pairs. Works down to subnormal
// gaps: 1 - rho^2 = (1-r^2)(1-s^2)/|1-rs e^{i dt}|^2 is formed from products
// of gaps, never from differences of near-1 quantities.
inline double log_inv_rho_polar(double gap_a, double gap_b, double dtheta) {
    const auto parts = detail::rho_parts_polar(gap_a, gap_b, dtheta);
    if (parts.num_dist == 0.0) return std::numeric_limits<double>::infinity();
    const double rho2 = parts.num_dist / parts.den;
    if (rho2 < 0.25) {
        const double v = -0.5 * std::log(rho2);
        return v > 0.0 ? v : 0.0;
    }
    const double t = parts.num_comp / parts.den;  // = 1 - rho^2
    const double v = -0.5 * std::log1p(-t);
    return v > 0.0 ? v : 0.0;
}

inline double pseudo_distance_polar(double gap_a, double gap_b, double dtheta) {
    const auto parts = detail::rho_parts_polar(gap_a, gap_b, dtheta);
    const double rho = std::sqrt(parts.num_dist / parts.den);
    return rho < 1.0 ? rho : max_radius_below_one();
}

// log(1/rho(a,b)); +inf at coincident points. Cartesian entry point: switches
// to the complement identity once rho^2 > 1/4 so values near the boundary
// keep full relative accuracy.
inline double log_inv_rho(const DiskPoint& a, const DiskPoint& b) {
    if (a == b) return std::numeric_limits<double>::infinity();
    const auto za = a.c(), zb = b.c();
    const double num2 = std::norm(za - zb);
    if (num2 == 0.0) return std::numeric_limits<double>::infinity();
    const double den2 = std::norm(1.0 - std::conj(za) * zb);
    const double rho2 = num2 / den2;
    if (rho2 < 0.25) {
        const double v = -0.5 * std::log(rho2);
        return v > 0.0 ? v : 0.0;
    }
    const double t = (1.0 - std::norm(za)) * (1.0 - std::norm(zb)) / den2;
    const double v = -0.5 * std::log1p(-t);
    return v > 0.0 ? v : 0.0;
}

// Normalized Blaschke factor b_c(z); b_0(z) = z. |b_c(z)| = rho(c, z).
inline std::complex<double> blaschke_factor(const DiskPoint& center, std::complex<double> z) {
    const auto c = center.c();
    const double m = std::abs(c);
    if (m == 0.0) return z;
    return (m / c) * (z - c) / (1.0 - std::conj(c) * z);
}

// Index n of the dyadic annulus 1 - 2^-n <= |z| < 1 - 2^-(n+1), from the
// boundary gap: annulus n holds 2^-(n+1) < gap <= 2^-n. Exact via frexp.
inline int annulus_index_from_gap(double gap) {
    if (!(gap > 0.0)) return 1075;  // gap underflowed; beyond double range
    if (gap > 1.0) throw std::invalid_argument("annulus_index: gap must be <= 1");
    int e = 0;
    const double m = std::frexp(gap, &e);  // gap = m * 2^e, m in [0.5, 1)
    return m == 0.5 ? 1 - e : -e;
}

inline int annulus_index(const DiskPoint& z) {
    return annulus_index_from_gap(1.0 - z.abs());
}

struct DyadicAnnulus {
    int index = 0;
    double inner() const { return 1.0 - std::ldexp(1.0, -index); }
    double outer() const { return 1.0 - std::ldexp(1.0, -(index + 1)); }
    bool contains(const DiskPoint& z) const { return annulus_index(z) == index; }
};

// Closed boundary arc centered at `center` with half-length in (0, pi].
struct BoundaryArc {
    double center = 0.0;
    double half_length = kPi;

    BoundaryArc() = default;
    BoundaryArc(double center_, double half_length_) : center(center_), half_length(half_length_) {
        if (!(half_length > 0.0) || !(half_length <= kPi))
            throw std::invalid_argument("BoundaryArc: half_length must be in (0, pi]");
    }

    // Normalized Lebesgue measure m(I) = half_length / pi.
    double measure() const { return half_length / kPi; }
};

struct StolzAngle {
    double vertex = 0.0;    // boundary angle of the vertex e^{i vertex}
    double aperture = 2.0;  // alpha >= 1

    StolzAngle() = default;
    StolzAngle(double vertex_, double aperture_) : vertex(vertex_), aperture(aperture_) {
        if (!(aperture >= 1.0)) throw std::invalid_argument("StolzAngle: aperture must be >= 1");
    }
};

inline bool stolz_contains(const StolzAngle& cone, const DiskPoint& z) {
    const std::complex<double> zeta{std::cos(cone.vertex), std::sin(cone.vertex)};
    return std::abs(zeta - z.c()) <= cone.aperture * (1.0 - z.abs());
}

namespace detail {

// Antiderivative of the Poisson kernel at radius r = 1-a along the circle:
// G(x) = 2 atan(((2-a)/a) tan(x/2)), valid on [-pi, pi], G(+-pi) = +-pi.
// G' = P_r, so image-arc lengths under the disk automorphism are exactly
// G(x2) - G(x1). atan2 form: (2-a)/a overflows for subnormal a.
inline double poisson_antiderivative(double gap, double x) {
    if (x >= kPi) return kPi;
    if (x <= -kPi) return -kPi;
    return 2.0 * std::atan2((2.0 - gap) * std::tan(0.5 * x), gap);
}

}  // namespace detail

// Harmonic measure omega(z, I) of a boundary arc seen from z = (1-gap) e^{i theta}:
// the normalized length of the Mobius image arc, computed through the Poisson
// antiderivative so near-boundary points and tiny arcs keep their accuracy.
inline double harmonic_measure_polar(double gap, double theta, const BoundaryArc& arc) {
    if (!(gap > 0.0) || gap > 1.0)
        throw std::invalid_argument("harmonic_measure: gap must be in (0, 1]");
    if (arc.half_length >= kPi) return 1.0;
    // Offset the arc center first: computing (center - half_length) - theta
    // absorbs a sub-ulp half_length into center and shifts the window by a
    // full half_length, which is an O(1) error for the point's own tiny arc.
    const double dc = wrap_angle(arc.center - theta);
    const double x1 = dc - arc.half_length;
    const double x2 = dc + arc.half_length;
    double len;
    if (x1 < -kPi) {  // arc crosses the antipode from the left
        len = (detail::poisson_antiderivative(gap, x2) + kPi) +
              (kPi - detail::poisson_antiderivative(gap, x1 + kTwoPi));
    } else if (x2 > kPi) {  // arc crosses the antipode from the right
        len = (kPi - detail::poisson_antiderivative(gap, x1)) +
              (detail::poisson_antiderivative(gap, x2 - kTwoPi) + kPi);
    } else {
        len = detail::poisson_antiderivative(gap, x2) - detail::poisson_antiderivative(gap, x1);
    }
    if (len < 0.0) len = 0.0;  // guard 1-ulp non-monotonicity of tan/atan
    const double w = len / kTwoPi;
    return w < 1.0 ? w : 1.0;
}

inline double harmonic_measure(const DiskPoint& z, const BoundaryArc& arc) {
    const double r = z.abs();
    if (r == 0.0) return arc.measure();
    return harmonic_measure_polar(1.0 - r, z.arg(), arc);
}

}  // namespace steinlab
