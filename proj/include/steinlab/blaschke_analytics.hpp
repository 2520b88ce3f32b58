#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "steinlab/disk_geometry.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/random_sequences.hpp"

namespace steinlab {

struct PhiEntry {
    std::size_t n = 0;   // index in the sample
    double radius = 0.0;
    double gap = 0.0;    // exact 1 - r
    double theta = 0.0;
    double value = 0.0;  // log 1/|B_n(lambda_n)| over the truncation
};

struct PhiLambdaTable {
    std::vector<PhiEntry> entries;
    std::size_t size() const { return entries.size(); }

    bool has_infinite() const {
        for (const auto& e : entries)
            if (std::isinf(e.value)) return true;
        return false;
    }
};

// phi_Lambda(lambda_n) = sum_{m != n} log 1/rho(lambda_n, lambda_m).
// Every row is summed over value-sorted terms with a pairwise tree, so the
// result is bit-identical under any permutation of the input points and any
// thread count. O(N^2).
inline PhiLambdaTable phi_lambda(const SequenceSample& sample, unsigned threads = 1) {
    const std::size_t n = sample.size();
    PhiLambdaTable table;
    table.entries.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<double> terms;
        terms.reserve(n > 0 ? n - 1 : 0);
        for (std::size_t m = 0; m < n; ++m) {
            if (m == i) continue;
            terms.push_back(
                log_inv_rho_polar(sample.gap[i], sample.gap[m], sample.theta[i] - sample.theta[m]));
        }
        PhiEntry e;
        e.n = i;
        e.radius = sample.radius[i];
        e.gap = sample.gap[i];
        e.theta = sample.theta[i];
        e.value = sorted_pairwise_sum(std::move(terms));
        table.entries[i] = e;
    });
    return table;
}

// X_p = sum_n (1 - |lambda_n|) * phi(lambda_n)^p, the H^p interpolation
// criterion sum. Infinite phi values (coincident points) propagate. The
// contributions are sorted before summation, so reordering the sample cannot
// change a bit of the result.
inline double criterion_sum(const PhiLambdaTable& table, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("criterion_sum: p must be >= 1");
    std::vector<double> contrib;
    contrib.reserve(table.size());
    for (const auto& e : table.entries) {
        if (std::isinf(e.value)) return std::numeric_limits<double>::infinity();
        contrib.push_back(e.gap * std::pow(e.value, p));
    }
    return sorted_pairwise_sum(std::move(contrib));
}

// sup_n (1 - |lambda_n|) * phi(lambda_n): the Naftalevic-side functional.
// Max is order-free, hence exactly permutation invariant.
inline double naftalevic_sup(const PhiLambdaTable& table) {
    double best = 0.0;
    for (const auto& e : table.entries) best = std::max(best, e.gap * e.value);
    return best;
}

struct SeparationReport {
    double weak = 1.0;    // min over pairs of rho
    double strong = 1.0;  // min over n of prod_{m != n} rho(lambda_n, lambda_m)
};

// Weak separation scans pairwise rho directly; strong separation is
// exp(-max phi), evaluated in the log domain so deep products do not
// underflow before they are compared.
inline SeparationReport separation(const SequenceSample& sample, unsigned threads = 1) {
    SeparationReport rep;
    const std::size_t n = sample.size();
    if (n < 2) return rep;
    std::vector<double> row_min(n, 1.0);
    parallel_for(n, threads, [&](std::size_t i) {
        double best = 1.0;
        for (std::size_t m = i + 1; m < n; ++m) {
            best = std::min(best, pseudo_distance_polar(sample.gap[i], sample.gap[m],
                                                        sample.theta[i] - sample.theta[m]));
        }
        row_min[i] = best;
    });
    for (double v : row_min) rep.weak = std::min(rep.weak, v);
    const auto table = phi_lambda(sample, threads);
    double max_phi = 0.0;
    for (const auto& e : table.entries) max_phi = std::max(max_phi, e.value);
    rep.strong = std::exp(-max_phi);
    return rep;
}

// Segment sums of X_p between record prefixes, accumulated from per-point
// deltas. Adding point j raises each prior term by (v_i+d)^p - v_i^p and adds
// the new point's own term; late deltas sit far below one ulp of the running
// total, so differencing totals would measure rounding noise instead.
// `record` must be strictly increasing with back() <= gap.size(). Returns
// [p_index][segment] where segment k covers prefix (record[k-1], record[k]].
inline std::vector<std::vector<double>> criterion_segment_sums(
    const std::vector<double>& gap, const std::vector<double>& theta,
    const std::vector<double>& p_list, const std::vector<std::size_t>& record) {
    for (double p : p_list)
        if (!(p >= 1.0))
            throw std::invalid_argument("criterion_segment_sums: p must be >= 1");
    for (std::size_t k = 0; k < record.size(); ++k)
        if (record[k] > gap.size() || (k > 0 && record[k] <= record[k - 1]))
            throw std::invalid_argument("criterion_segment_sums: bad record points");
    if (gap.size() != theta.size())
        throw std::invalid_argument("criterion_segment_sums: size mismatch");
    const std::size_t np = p_list.size();
    std::vector<std::vector<double>> out(np, std::vector<double>(record.size(), 0.0));
    if (record.empty()) return out;
    const std::size_t n_max = record.back();
    std::vector<double> v(n_max, 0.0);
    std::vector<double> dbuf;
    std::vector<std::vector<double>> window_terms(np);
    std::size_t rec_idx = 0;
    for (std::size_t j = 0; j < n_max; ++j) {
        dbuf.resize(j);
        for (std::size_t i = 0; i < j; ++i)
            dbuf[i] = log_inv_rho_polar(gap[i], gap[j], theta[i] - theta[j]);
        std::vector<double> phi_terms = dbuf;
        const double phi_j = sorted_pairwise_sum(std::move(phi_terms));
        for (std::size_t pi = 0; pi < np; ++pi) {
            const double p = p_list[pi];
            std::vector<double> pieces;
            pieces.reserve(j + 1);
            const double own = gap[j] * (p == 1.0 ? phi_j : std::pow(phi_j, p));
            if (own > 0.0) pieces.push_back(own);
            for (std::size_t i = 0; i < j; ++i) {
                const double inc = gap[i] * power_increment(v[i], dbuf[i], p);
                if (inc > 0.0) pieces.push_back(inc);
            }
            window_terms[pi].push_back(sorted_pairwise_sum(std::move(pieces)));
        }
        for (std::size_t i = 0; i < j; ++i) v[i] += dbuf[i];
        v[j] = phi_j;
        if (j + 1 == record[rec_idx]) {
            for (std::size_t pi = 0; pi < np; ++pi) {
                out[pi][rec_idx] = sorted_pairwise_sum(std::move(window_terms[pi]));
                window_terms[pi].clear();
            }
            ++rec_idx;
        }
    }
    return out;
}

}  // namespace steinlab
