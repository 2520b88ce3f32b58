#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "steinlab/blaschke_analytics.hpp"
#include "steinlab/disk_geometry.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/quadrature.hpp"

namespace steinlab {

// Poisson kernel P_z(e^{i theta}) = (1-|z|^2)/|e^{i theta} - z|^2, in the
// cancellation-free gap form.
inline double poisson_kernel_polar(double gap, double dtheta) {
    const double r = 1.0 - gap;
    const double sn = std::sin(0.5 * dtheta);
    return gap * (2.0 - gap) / (gap * gap + 4.0 * r * sn * sn);
}

inline double poisson_kernel(const DiskPoint& z, double theta) {
    const double r = z.abs();
    return poisson_kernel_polar(1.0 - r, theta - z.arg());
}

// ||P_z||_{L^q}^q = (1/2pi) int P_z^q dtheta by adaptive quadrature with
// panels concentrated at the kernel's peak angle.
inline QuadratureResult poisson_lq_norm_pow(const DiskPoint& z, double q,
                                            const QuadratureOptions& opt = {}) {
    if (!(q >= 1.0)) throw std::invalid_argument("poisson_lq_norm: q must be >= 1");
    const double r = z.abs();
    const double gap = 1.0 - r;
    const double peak = z.arg();
    auto f = [gap, peak, q](double th) {
        return std::pow(poisson_kernel_polar(gap, th - peak), q);
    };
    return integrate_circle_mean(f, {peak}, gap * gap * 1e-4, opt);
}

// ||P_z||_{L^q} itself.
inline QuadratureResult poisson_lq_norm(const DiskPoint& z, double q,
                                        const QuadratureOptions& opt = {}) {
    auto res = poisson_lq_norm_pow(z, q, opt);
    const double pw = res.value;
    res.value = std::pow(pw, 1.0 / q);
    // first-order error propagation through x^{1/q}
    res.abs_error = pw > 0.0 ? res.abs_error * res.value / (q * pw) : res.abs_error;
    return res;
}

// Nonnegative step function on the circle: sum of weighted indicator arcs.
struct WeightedArc {
    BoundaryArc arc;
    double weight = 0.0;
};

struct StepFunction {
    std::vector<WeightedArc> terms;

    // L^1 norm: integral of a nonnegative sum is the sum of the integrals,
    // overlap or not; exact in the gap arithmetic.
    double norm_l1() const {
        std::vector<double> xs;
        xs.reserve(terms.size());
        for (const auto& t : terms) xs.push_back(t.weight * t.arc.measure());
        return sorted_pairwise_sum(std::move(xs));
    }

    // Value at an angle (sum of covering arcs); O(#terms).
    double value_at(double theta) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            const double d = std::abs(wrap_angle(theta - t.arc.center));
            if (d <= t.arc.half_length) acc += t.weight;
        }
        return acc;
    }

    // ||psi||_{L^p}^p by exact breakpoint decomposition: between consecutive
    // arc endpoints the function is constant, so the integral is a finite sum
    // of value^p * length terms.
    double norm_lp_pow(double p) const {
        if (!(p >= 1.0)) throw std::invalid_argument("StepFunction: p must be >= 1");
        struct Event {
            double x;
            double delta;
        };
        std::vector<Event> events;
        double base = 0.0;  // full-circle terms contribute a constant
        for (const auto& t : terms) {
            if (t.arc.half_length >= kPi) {
                base += t.weight;
                continue;
            }
            double s = wrap_angle_positive(t.arc.center - t.arc.half_length);
            double e = s + 2.0 * t.arc.half_length;
            if (e <= kTwoPi) {
                events.push_back({s, t.weight});
                events.push_back({e, -t.weight});
            } else {
                events.push_back({s, t.weight});
                events.push_back({kTwoPi, -t.weight});
                events.push_back({0.0, t.weight});
                events.push_back({e - kTwoPi, -t.weight});
            }
        }
        if (events.empty()) return std::pow(base, p);
        std::sort(events.begin(), events.end(),
                  [](const Event& a, const Event& b) { return a.x < b.x; });
        std::vector<double> pieces;
        double active = base;
        double prev = 0.0;
        std::size_t i = 0;
        while (i < events.size()) {
            const double x = events[i].x;
            if (x > prev && active > 0.0)
                pieces.push_back(std::pow(active, p) * (x - prev));
            while (i < events.size() && events[i].x == x) {
                active += events[i].delta;
                ++i;
            }
            prev = x;
        }
        if (kTwoPi > prev && active > 0.0)
            pieces.push_back(std::pow(active, p) * (kTwoPi - prev));
        return sorted_pairwise_sum(std::move(pieces)) / kTwoPi;
    }

    double norm_lp(double p) const { return std::pow(norm_lp_pow(p), 1.0 / p); }
};

// Finite positive measure: weighted atoms in the disk.
struct DiscreteMeasure {
    std::vector<std::pair<DiskPoint, double>> atoms;

    double mass() const {
        std::vector<double> w;
        w.reserve(atoms.size());
        for (const auto& a : atoms) w.push_back(a.second);
        return sorted_pairwise_sum(std::move(w));
    }
};

// Balayage of the measure to the boundary: (B mu)(e^{i theta}) = sum alpha_j P_{z_j}(theta).
inline double balayage_value(const DiscreteMeasure& mu, double theta) {
    double acc = 0.0;
    for (const auto& [z, w] : mu.atoms) acc += w * poisson_kernel(z, theta);
    return acc;
}

inline QuadratureResult balayage_lq_norm_pow(const DiscreteMeasure& mu, double q,
                                             const QuadratureOptions& opt = {}) {
    if (!(q >= 1.0)) throw std::invalid_argument("balayage norm: q must be >= 1");
    std::vector<double> peaks;
    double min_gap = 1.0;
    for (const auto& [z, w] : mu.atoms) {
        peaks.push_back(z.arg());
        min_gap = std::min(min_gap, 1.0 - z.abs());
    }
    auto f = [&mu, q](double th) { return std::pow(balayage_value(mu, th), q); };
    return integrate_circle_mean(f, peaks, min_gap * min_gap * 1e-4, opt);
}

// Lemma-style pairing of a balayage-norm bound with the weighted atom sum
// S = sum alpha^q (1-|lambda|)^{1-q}. S is the quantity the norm bound caps.
struct AlphaLambdaCheck {
    double balayage_norm = 0.0;  // ||B mu||_{L^q}
    double weighted_sum = 0.0;   // S
    bool norm_within_unit = false;
    double quadrature_error = 0.0;
};

inline AlphaLambdaCheck alpha_lambda_check(const DiscreteMeasure& mu, double q,
                                           const QuadratureOptions& opt = {}) {
    AlphaLambdaCheck out;
    if (mu.atoms.empty()) return out;
    auto norm_pow = balayage_lq_norm_pow(mu, q, opt);
    out.balayage_norm = std::pow(norm_pow.value, 1.0 / q);
    out.quadrature_error = norm_pow.abs_error;
    out.norm_within_unit = out.balayage_norm <= 1.0 + 1e-9;
    std::vector<double> terms;
    for (const auto& [z, w] : mu.atoms)
        terms.push_back(std::pow(w, q) * std::pow(1.0 - z.abs(), 1.0 - q));
    out.weighted_sum = sorted_pairwise_sum(std::move(terms));
    return out;
}

// The majorant data of a phi table: arcs I_n centered at each point's
// boundary direction with half-length (1 - |lambda_n|), weighted by
// K_n * phi_n where K_n = 1/omega(lambda_n, I_n). The per-point correction
// K_n makes P[psi](lambda_n) >= phi_n certifiable at machine precision.
// The same rule covers lambda = 0: a half-length-1 arc with K = pi. A wider
// arc there would break ||psi||_1 <= sup K * X_1 / pi, since the L1 budget
// per point is its arc length.
struct MajorantData {
    StepFunction psi;
    std::vector<double> k_factor;   // K per contributing entry
    std::vector<std::size_t> entry; // index into table.entries
    double sup_k = 0.0;
};

inline MajorantData build_psi(const PhiLambdaTable& table) {
    MajorantData out;
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const auto& e = table.entries[i];
        if (std::isinf(e.value))
            throw std::invalid_argument("build_psi: phi table has infinite entries");
        if (!(e.value > 0.0)) continue;
        const BoundaryArc arc(e.theta, std::min(e.gap, kPi));
        const double k = 1.0 / harmonic_measure_polar(e.gap, e.theta, arc);
        out.psi.terms.push_back({arc, k * e.value});
        out.k_factor.push_back(k);
        out.entry.push_back(i);
        out.sup_k = std::max(out.sup_k, k);
    }
    return out;
}

// Poisson extension of a step function at z: P[psi](z) = sum_j w_j omega(z, I_j).
inline double poisson_extension_step(const StepFunction& psi, const DiskPoint& z) {
    std::vector<double> terms;
    terms.reserve(psi.terms.size());
    for (const auto& t : psi.terms) terms.push_back(t.weight * harmonic_measure(z, t.arc));
    return sorted_pairwise_sum(std::move(terms));
}

inline double poisson_extension_step_polar(const StepFunction& psi, double gap, double theta) {
    std::vector<double> terms;
    terms.reserve(psi.terms.size());
    for (const auto& t : psi.terms)
        terms.push_back(t.weight * harmonic_measure_polar(gap, theta, t.arc));
    return sorted_pairwise_sum(std::move(terms));
}

// Pinned certification tolerance: margins below -1e-9 invalidate.
inline constexpr double kMarginTolerance = 1e-9;

struct MajorantCertificate {
    double p = 2.0;
    std::vector<double> margins;  // P[psi](lambda_n) - phi_n per entry
    double psi_l1 = 0.0;
    double psi_lp = 0.0;          // ||psi||_{L^p}
    double sup_k = 0.0;
    double min_margin = 0.0;
    bool valid = false;
};

// Certify P[psi] >= phi on the sequence itself. Margins are evaluated in the
// gap domain so deep points keep their own-arc term exact; sharing the K
// factors with build_psi makes each own term reproduce phi_n to a rounding.
inline std::vector<MajorantCertificate> certify_majorant_many(const PhiLambdaTable& table,
                                                              const std::vector<double>& p_list,
                                                              unsigned threads = 1) {
    const auto data = build_psi(table);
    std::vector<double> margins(table.entries.size(), 0.0);
    parallel_for(table.entries.size(), threads, [&](std::size_t i) {
        const auto& e = table.entries[i];
        margins[i] = poisson_extension_step_polar(data.psi, e.gap, e.theta) - e.value;
    });
    double min_margin = 0.0;
    if (!margins.empty()) {
        min_margin = margins.front();
        for (double m : margins) min_margin = std::min(min_margin, m);
    }
    const double l1 = data.psi.norm_l1();
    std::vector<MajorantCertificate> out;
    for (double p : p_list) {
        MajorantCertificate cert;
        cert.p = p;
        cert.margins = margins;
        cert.psi_l1 = l1;
        cert.psi_lp = data.psi.norm_lp(p);
        cert.sup_k = data.sup_k;
        cert.min_margin = min_margin;
        cert.valid = min_margin >= -kMarginTolerance;
        out.push_back(std::move(cert));
    }
    return out;
}

inline MajorantCertificate certify_majorant(const PhiLambdaTable& table, double p,
                                            unsigned threads = 1) {
    return certify_majorant_many(table, {p}, threads).front();
}

}  // namespace steinlab
