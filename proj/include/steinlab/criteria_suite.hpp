#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "steinlab/blaschke_analytics.hpp"
#include "steinlab/disk_geometry.hpp"
#include "steinlab/harmonic_majorants.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/random_sequences.hpp"

namespace steinlab {

// Canonical point order: ascending radius, then descending exact gap, then
// ascending theta. Reports built from the sorted copy are bit-identical under
// any permutation of the input sample. The gap key matters: radii clamp at
// the largest double below 1, so deep points tie on radius while their exact
// gaps still order them by true depth; without it prefix windows would mix
// depths at random and the increment-decay diagnostics would see ulp noise.
inline SequenceSample canonical_order(const SequenceSample& sample) {
    const std::size_t n = sample.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (sample.radius[a] != sample.radius[b]) return sample.radius[a] < sample.radius[b];
        if (sample.gap[a] != sample.gap[b]) return sample.gap[a] > sample.gap[b];
        return sample.theta[a] < sample.theta[b];
    });
    SequenceSample out;
    out.profile = sample.profile;
    out.seed = sample.seed;
    out.radius.reserve(n);
    out.gap.reserve(n);
    out.theta.reserve(n);
    out.points.reserve(n);
    for (std::size_t i : idx) {
        out.radius.push_back(sample.radius[i]);
        out.gap.push_back(sample.gap[i]);
        out.theta.push_back(sample.theta[i]);
        out.points.push_back(sample.points[i]);
    }
    return out;
}

struct CriterionReport {
    BlaschkeSummary blaschke;
    std::map<double, double> criterion_sums;  // p -> X_p
    double naftalevic_sup_value = 0.0;
    SeparationReport sep;
    std::vector<MajorantCertificate> certificates;  // one per requested p
    bool has_duplicates = false;

    std::vector<std::size_t> prefix_checkpoints;               // {N/4, N/2, N} when N >= 8
    std::map<double, std::vector<double>> prefix_increments;   // per p, per window
    std::map<double, bool> increments_decaying;                // per p

    bool blaschke_verdict = false;            // profile tail converges
    std::map<double, bool> hp_certified;      // finite X_p, decaying, valid certificate
    bool smirnov_certified = false;           // finite X_1 and valid certificate
};

inline CriterionReport evaluate_criteria(const SequenceSample& sample,
                                         const std::vector<double>& p_list,
                                         unsigned threads = 1) {
    if (p_list.empty()) throw std::invalid_argument("evaluate_criteria: p_list is empty");
    for (double p : p_list)
        if (!(p >= 1.0)) throw std::invalid_argument("evaluate_criteria: p must be >= 1");
    const SequenceSample canon = canonical_order(sample);
    const std::size_t n = canon.size();

    CriterionReport rep;
    rep.blaschke = blaschke_sum(canon.profile, RadiiData{canon.radius, canon.gap});
    rep.blaschke_verdict = rep.blaschke.tail_convergent;

    const auto table = phi_lambda(canon, threads);
    rep.has_duplicates = table.has_infinite();
    for (double p : p_list) rep.criterion_sums[p] = criterion_sum(table, p);
    const double x1 = criterion_sum(table, 1.0);
    rep.naftalevic_sup_value = naftalevic_sup(table);
    rep.sep = separation(canon, threads);

    // Prefix-increment decay along {N/4, N/2, N}; skipped below 8 points
    // (single points and toy samples are trivially stable).
    if (n >= 8) {
        rep.prefix_checkpoints = {n / 4, n / 2, n};
        const auto segs =
            criterion_segment_sums(canon.gap, canon.theta, p_list, rep.prefix_checkpoints);
        for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
            rep.prefix_increments[p_list[pi]] = segs[pi];
            bool dec = true;
            for (std::size_t k = 1; k < segs[pi].size(); ++k)
                dec = dec && segs[pi][k] < segs[pi][k - 1];
            rep.increments_decaying[p_list[pi]] = dec;
        }
    } else {
        for (double p : p_list) rep.increments_decaying[p] = true;
    }

    bool cert_valid = false;
    if (!rep.has_duplicates) {
        rep.certificates = certify_majorant_many(table, p_list, threads);
        cert_valid = !rep.certificates.empty() && rep.certificates.front().valid;
    }
    for (double p : p_list) {
        const bool finite = std::isfinite(rep.criterion_sums[p]);
        rep.hp_certified[p] = finite && rep.increments_decaying[p] && cert_valid;
    }
    rep.smirnov_certified = std::isfinite(x1) && cert_valid;
    return rep;
}

// Greedy finite-union Stolz cover. A point z = (1-a)e^{i t} lies in the Stolz
// angle at vertex e^{i v} iff |e^{iv} - z| <= alpha(1-|z|), which in the gap
// form reads a^2 + 4(1-a)sin^2((t-v)/2) <= alpha^2 a^2; the Cartesian cosine
// form loses every significant digit once a is small. Candidate vertices are
// M equispaced angles; each greedy step takes the one covering the most
// still-uncovered points (ties to the smallest index).
struct StolzCoverReport {
    std::size_t k = 0;
    double alpha = 1.0;
    std::size_t candidates = 0;
    std::vector<double> vertices;
    std::size_t covered = 0;
    std::size_t total = 0;
    double covered_fraction = 0.0;
};

inline StolzCoverReport stolz_cover_greedy(const SequenceSample& sample, std::size_t k,
                                           double alpha, std::size_t m_candidates = 720) {
    if (!(alpha > 1.0)) throw std::invalid_argument("stolz_cover_greedy: alpha must be > 1");
    if (m_candidates < 1) throw std::invalid_argument("stolz_cover_greedy: need candidates");
    const std::size_t n = sample.size();
    StolzCoverReport rep;
    rep.k = k;
    rep.alpha = alpha;
    rep.candidates = m_candidates;
    rep.total = n;
    if (n == 0) return rep;

    // Angular coverage half-width per point.
    std::vector<double> width(n);
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = sample.gap[i];
        theta[i] = wrap_angle_positive(sample.theta[i]);
        if (a >= 1.0) {
            width[i] = kPi;  // center point: inside every Stolz angle
            continue;
        }
        if (!(a > 0.0)) {
            width[i] = 0.0;  // boundary point: only its own ray qualifies
            continue;
        }
        const double arg = a * a * (alpha * alpha - 1.0) / (4.0 * (1.0 - a));
        width[i] = arg >= 1.0 ? kPi : 2.0 * std::asin(std::sqrt(arg));
    }

    const double step = kTwoPi / static_cast<double>(m_candidates);
    std::vector<bool> covered(n, false);
    std::vector<long long> diff(m_candidates + 1, 0);
    std::size_t covered_count = 0;

    for (std::size_t round = 0; round < k; ++round) {
        std::fill(diff.begin(), diff.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (covered[i] || width[i] <= 0.0) continue;
            const double lo_real = (theta[i] - width[i]) / step;
            const double hi_real = (theta[i] + width[i]) / step;
            long long lo = static_cast<long long>(std::ceil(lo_real));
            long long hi = static_cast<long long>(std::floor(hi_real));
            if (hi < lo) continue;
            if (hi - lo + 1 >= static_cast<long long>(m_candidates)) {
                diff[0] += 1;
                diff[m_candidates] -= 1;
                continue;
            }
            long long a = ((lo % static_cast<long long>(m_candidates)) +
                           static_cast<long long>(m_candidates)) %
                          static_cast<long long>(m_candidates);
            long long b = ((hi % static_cast<long long>(m_candidates)) +
                           static_cast<long long>(m_candidates)) %
                          static_cast<long long>(m_candidates);
            if (a <= b) {
                diff[static_cast<std::size_t>(a)] += 1;
                diff[static_cast<std::size_t>(b) + 1] -= 1;
            } else {  // wraps past the seam
                diff[static_cast<std::size_t>(a)] += 1;
                diff[m_candidates] -= 1;
                diff[0] += 1;
                diff[static_cast<std::size_t>(b) + 1] -= 1;
            }
        }
        long long best_count = 0;
        std::size_t best_idx = 0;
        long long running = 0;
        for (std::size_t c = 0; c < m_candidates; ++c) {
            running += diff[c];
            if (running > best_count) {
                best_count = running;
                best_idx = c;
            }
        }
        if (best_count == 0) break;  // nothing left that any candidate can add
        const double vertex = step * static_cast<double>(best_idx);
        rep.vertices.push_back(vertex);
        for (std::size_t i = 0; i < n; ++i) {
            if (covered[i]) continue;
            if (std::abs(wrap_angle(theta[i] - vertex)) <= width[i]) {
                covered[i] = true;
                ++covered_count;
            }
        }
    }
    rep.covered = covered_count;
    rep.covered_fraction = static_cast<double>(covered_count) / static_cast<double>(n);
    return rep;
}

// Deterministic two-sequence table: lambda_n = 1-2^{-n} with a radial
// companion mu_n at pseudohyperbolic distance exp(-n 2^n). Everything is
// carried in the log domain; the products and ceilings are exact dyadic
// arithmetic. Valid through n = 40.
struct CarlesonRow {
    int n = 0;
    double r = 0.0;                  // 1 - 2^{-n}, exact
    double s_log_gap = 0.0;          // log(1 - s) for the solved companion
    double log_rho_target = 0.0;     // -n 2^n
    double log_rho_reproduced = 0.0; // via log rho = log d - log(1-r^2 - r d)
    double logB_lower = 0.0;         // n 2^n
    double harnack_ceiling = 0.0;    // 2 * 2^n
    double naftalevic_product = 0.0; // (1-r) * n 2^n = n, exact
    double ratio = 0.0;              // logB_lower / harnack_ceiling = n/2
};

inline std::vector<CarlesonRow> carleson_counterexample(int n_max) {
    if (n_max < 1 || n_max > 40)
        throw std::invalid_argument("carleson_counterexample: n_max must be in 1..40");
    std::vector<CarlesonRow> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        CarlesonRow row;
        row.n = n;
        const double gap = std::ldexp(1.0, -n);
        row.r = 1.0 - gap;
        const double big = static_cast<double>(n) * std::ldexp(1.0, n);  // n 2^n, exact
        row.log_rho_target = -big;
        row.logB_lower = big;
        row.harnack_ceiling = std::ldexp(2.0, n);
        row.naftalevic_product = gap * big;  // power-of-two rescale of an exact integer
        row.ratio = 0.5 * static_cast<double>(n);

        // Companion s = (r + rho)/(1 + r rho); rho underflows beyond n = 6,
        // at which point every correction term is exactly zero.
        const double rho = std::exp(-big);
        const double one_minus_r2 = gap * (2.0 - gap);
        const double log_corr = std::log1p(row.r * rho);
        const double log_delta = -big + std::log(one_minus_r2) - log_corr;  // log(s - r)
        row.s_log_gap = std::log(gap) + std::log1p(-rho) - log_corr;

        const double delta = std::exp(log_delta);
        row.log_rho_reproduced = log_delta - std::log(one_minus_r2 - row.r * delta);
        out.push_back(row);
    }
    return out;
}

}  // namespace steinlab
