#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "steinlab/disk_geometry.hpp"
#include "steinlab/harmonic_majorants.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/quadrature.hpp"
#include "steinlab/random_sequences.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

struct EstimatorResult {
    enum class Method { monte_carlo, quadrature };
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(n); zero for quadrature
    std::size_t n_samples = 0;
    Method method = Method::quadrature;
    double achieved_error = 0.0;  // quadrature error estimate
    bool converged = true;
};

namespace detail {

// Mean and standard error of a sample, summed in canonical order so the
// result is independent of how the values were produced.
inline void mean_and_se(std::vector<double> xs, double& mean, double& se) {
    const std::size_t n = xs.size();
    if (n == 0) {
        mean = 0.0;
        se = 0.0;
        return;
    }
    std::vector<double> copy = xs;
    mean = sorted_pairwise_sum(std::move(copy)) / static_cast<double>(n);
    if (n < 2) {
        se = 0.0;
        return;
    }
    for (double& x : xs) {
        const double d = x - mean;
        x = d * d;
    }
    const double var = sorted_pairwise_sum(std::move(xs)) / static_cast<double>(n - 1);
    se = std::sqrt(var / static_cast<double>(n));
}

}  // namespace detail

// E[log^p 1/rho(r e^{i t1}, s e^{i t2})] over independent uniform angles.
// Rotation invariance reduces it to one angular integral whose integrand has
// an integrable logarithmic singularity at angle 0 when r = s.
inline EstimatorResult expect_logp_rho_quadrature(double r, double s, double p,
                                                  const QuadratureOptions& opt = {}) {
    if (!(r >= 0.0) || !(r < 1.0) || !(s >= 0.0) || !(s < 1.0))
        throw std::invalid_argument("expect_logp_rho: radii must be in [0, 1)");
    if (!(p >= 1.0)) throw std::invalid_argument("expect_logp_rho: p must be >= 1");
    const double ga = 1.0 - r;
    const double gb = 1.0 - s;
    const double w = std::min(ga, gb);
    auto f = [ga, gb, p](double th) {
        const double v = log_inv_rho_polar(ga, gb, th);
        return p == 1.0 ? v : std::pow(v, p);
    };
    const auto q = integrate_circle_mean(f, {0.0}, w * w * 1e-4, opt);
    EstimatorResult out;
    out.mean = q.value;
    out.n_samples = q.evaluations;
    out.method = EstimatorResult::Method::quadrature;
    out.achieved_error = q.abs_error;
    out.converged = q.converged;
    return out;
}

inline EstimatorResult expect_logp_rho_mc(double r, double s, double p, std::size_t n,
                                          std::uint64_t seed) {
    if (!(r >= 0.0) || !(r < 1.0) || !(s >= 0.0) || !(s < 1.0))
        throw std::invalid_argument("expect_logp_rho: radii must be in [0, 1)");
    if (!(p >= 1.0)) throw std::invalid_argument("expect_logp_rho: p must be >= 1");
    if (n < 2) throw std::invalid_argument("expect_logp_rho: need n >= 2 samples");
    const double ga = 1.0 - r;
    const double gb = 1.0 - s;
    const CounterRng rng(CounterRng::derive(seed, stream::kMonteCarlo));
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = log_inv_rho_polar(ga, gb, rng.angle(i));
        xs[i] = p == 1.0 ? v : std::pow(v, p);
    }
    EstimatorResult out;
    out.n_samples = n;
    out.method = EstimatorResult::Method::monte_carlo;
    detail::mean_and_se(std::move(xs), out.mean, out.std_error);
    out.converged = std::isfinite(out.mean);
    return out;
}

// One row of a verification battery; the fields mirror the CSV schema
// lemma,p,r,s,method,estimate,error,bound_ref,ratio,pass.
struct BatteryRow {
    std::string lemma;
    double p = 0.0;
    double r = 0.0;
    double s = 0.0;
    std::string method;
    double estimate = 0.0;
    double error = 0.0;
    double bound_ref = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

struct LemmaVerdict {
    std::string lemma_id;
    std::string grid;
    std::vector<BatteryRow> rows;
    std::vector<double> ratios;  // normalized exceedances; pass iff all <= bound_constant
    double bound_constant = 1.0;
    bool pass = false;
};

namespace detail {

inline std::string format_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

}  // namespace detail

// Identity check: E[log 1/rho] = min(log 1/r, log 1/s). Quadrature must hit
// the closed form to `tol`; Monte Carlo must agree within 3 standard errors.
inline LemmaVerdict cochran_check(const std::vector<double>& grid = {0.5, 0.9, 0.99},
                                  std::size_t mc_n = 1000000, std::uint64_t seed = 0,
                                  double tol = 1e-7) {
    LemmaVerdict v;
    v.lemma_id = "cochran";
    v.grid = "r,s in {";
    for (std::size_t i = 0; i < grid.size(); ++i)
        v.grid += (i ? "," : "") + detail::format_num(grid[i]);
    v.grid += "}^2";
    v.bound_constant = 1.0;
    bool all = true;
    for (double r : grid) {
        for (double s : grid) {
            const double closed = std::min(std::log(1.0 / r), std::log(1.0 / s));
            const auto quad = expect_logp_rho_quadrature(r, s, 1.0);
            const double qdev = std::abs(quad.mean - closed);
            BatteryRow qr{"cochran", 1.0,       r,    s, "quadrature", quad.mean,
                          qdev,      closed, qdev / tol, qdev <= tol};
            v.rows.push_back(qr);
            v.ratios.push_back(qdev / tol);
            all = all && qr.pass;

            const auto mc = expect_logp_rho_mc(r, s, 1.0, mc_n, seed);
            const double mdev = std::abs(mc.mean - closed);
            const double band = 3.0 * mc.std_error;
            BatteryRow mr{"cochran", 1.0,  r, s, "monte_carlo", mc.mean, mc.std_error,
                          closed, band > 0.0 ? mdev / band : 0.0, mdev <= band};
            v.rows.push_back(mr);
            v.ratios.push_back(mr.ratio);
            all = all && mr.pass;
        }
    }
    v.pass = all;
    return v;
}

// Poisson-norm growth: (1-r)^{q-1} ||P_z||_q^q must stay in a narrow band as
// r -> 1, and the q=2 value must hit the exact rational (1+r^2)/(1-r^2).
inline LemmaVerdict poisson_norm_check(const std::vector<double>& q_list = {1.5, 2.0, 3.0},
                                       const std::vector<double>& gap_list = {1e-1, 1e-2, 1e-3,
                                                                              1e-4},
                                       double band = 4.0, double parseval_tol = 1e-8) {
    LemmaVerdict v;
    v.lemma_id = "poisson-norm";
    v.grid = "q in {1.5,2,3}, 1-r in {1e-1..1e-4}";
    v.bound_constant = band;
    bool all = true;
    for (double q : q_list) {
        std::vector<double> products;
        std::size_t first_row = v.rows.size();
        for (double gap : gap_list) {
            const double r = 1.0 - gap;
            const auto z = DiskPoint::from_polar(r, 0.0);
            const auto norm_pow = poisson_lq_norm_pow(z, q);
            const double product = std::pow(gap, q - 1.0) * norm_pow.value;
            products.push_back(product);
            BatteryRow row{"poisson-norm", q,       r,   0.0, "quadrature", norm_pow.value,
                           norm_pow.abs_error, 0.0, product, true};
            if (q == 2.0) {
                const double exact = (1.0 + r * r) / (1.0 - r * r);
                row.bound_ref = exact;
                const double rel = std::abs(norm_pow.value - exact) / exact;
                row.pass = rel <= parseval_tol;
                all = all && row.pass;
            }
            v.rows.push_back(row);
        }
        double lo = products.front(), hi = products.front();
        for (double x : products) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < products.size(); ++k) {
            v.ratios.push_back(products[k] / lo);
            v.rows[first_row + k].pass = v.rows[first_row + k].pass && spread <= band;
        }
        all = all && spread <= band;
    }
    v.pass = all;
    return v;
}

// Same-annulus expectation growth: ratios E[log^p 1/rho]/(1-r^2) must stay in
// a factor `band` across the radius grid, separately per companion regime
// (1-s) = m (1-r); boundedness is the testable claim, the constant is not.
inline LemmaVerdict diagonal_bound_check(double p,
                                         const std::vector<double>& r_grid = {0.9, 0.99, 0.999,
                                                                              0.9999},
                                         double band = 10.0,
                                         const QuadratureOptions& opt = {}) {
    if (!(p >= 1.0)) throw std::invalid_argument("diagonal_bound_check: p must be >= 1");
    LemmaVerdict v;
    v.lemma_id = "diagonal";
    v.grid = "p=" + detail::format_num(p) + ", r in {0.9..0.9999}, (1-s)/(1-r) in {1/2,1,2}";
    v.bound_constant = band;
    bool all = true;
    static constexpr double kRegimes[] = {0.5, 1.0, 2.0};
    for (double m : kRegimes) {
        std::vector<double> ratios;
        std::size_t first_row = v.rows.size();
        for (double r : r_grid) {
            const double ga = 1.0 - r;
            const double s = 1.0 - m * ga;
            const auto est = expect_logp_rho_quadrature(r, s, p, opt);
            const double norm = ga * (2.0 - ga);  // 1 - r^2
            const double ratio = est.mean / norm;
            ratios.push_back(ratio);
            v.rows.push_back({"diagonal", p, r, s, "quadrature", est.mean, est.achieved_error,
                              norm, ratio, true});
        }
        double lo = ratios.front(), hi = ratios.front();
        for (double x : ratios) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < ratios.size(); ++k) {
            v.ratios.push_back(ratios[k] / lo);
            v.rows[first_row + k].pass = spread <= band;
        }
        all = all && spread <= band;
    }
    v.pass = all;
    return v;
}

// Distinct-annuli expectation bound: ratios E[log^p 1/rho]/min(1-r, 1-s) per
// annulus-gap family across levels. Pairs are annulus midpoints with gap
// indices differing by g >= 2; the degenerate r=0 row joins its gap family.
inline LemmaVerdict offdiagonal_bound_check(double p, int level_min = 2, int level_max = 12,
                                            int gap_min = 2, int gap_max = 8,
                                            int level_plus_gap_max = 14, double band = 10.0,
                                            const QuadratureOptions& opt = {}) {
    if (!(p >= 1.0)) throw std::invalid_argument("offdiagonal_bound_check: p must be >= 1");
    LemmaVerdict v;
    v.lemma_id = "offdiagonal";
    v.grid = "p=" + detail::format_num(p) + ", levels " + std::to_string(level_min) + ".." +
             std::to_string(level_max) + ", annulus gaps " + std::to_string(gap_min) + ".." +
             std::to_string(gap_max);
    v.bound_constant = band;
    bool all = true;
    for (int g = gap_min; g <= gap_max; ++g) {
        std::vector<double> ratios;
        std::size_t first_row = v.rows.size();
        for (int n = level_min; n <= level_max && n + g <= level_plus_gap_max; ++n) {
            const double ga = std::ldexp(0.75, -n);
            const double gb = std::ldexp(0.75, -(n + g));
            const double r = 1.0 - ga;
            const double s = 1.0 - gb;
            const auto est = expect_logp_rho_quadrature(r, s, p, opt);
            const double ratio = est.mean / gb;
            ratios.push_back(ratio);
            v.rows.push_back({"offdiagonal", p, r, s, "quadrature", est.mean,
                              est.achieved_error, gb, ratio, true});
        }
        if (g == 5) {  // degenerate center row: annulus 0 vs annulus 5
            const double s = 0.96875;
            const auto est = expect_logp_rho_quadrature(0.0, s, p, opt);
            const double ratio = est.mean / (1.0 - s);
            ratios.push_back(ratio);
            v.rows.push_back({"offdiagonal", p, 0.0, s, "quadrature", est.mean,
                              est.achieved_error, 1.0 - s, ratio, true});
        }
        if (ratios.empty()) continue;
        double lo = ratios.front(), hi = ratios.front();
        for (double x : ratios) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < ratios.size(); ++k) {
            v.ratios.push_back(ratios[k] / lo);
            v.rows[first_row + k].pass = spread <= band;
        }
        all = all && spread <= band;
    }
    v.pass = all;
    return v;
}

// Distribution family for the moment-inequality battery. Every kind exposes
// exact moments: closed forms for exponential and lognormal, quadrature for
// angle pulls of log 1/rho, so the Monte Carlo layer is independently checked.
struct DistributionSpec {
    enum class Kind { exponential, lognormal, log_rho };
    Kind kind = Kind::exponential;
    double a = 1.0;      // rate | mu | radius r
    double b = 0.0;      // unused | sigma | radius s
    double scale = 1.0;  // multiplier applied to every draw

    static DistributionSpec exponential(double rate) { return {Kind::exponential, rate, 0.0, 1.0}; }
    static DistributionSpec lognormal(double mu, double sigma) {
        return {Kind::lognormal, mu, sigma, 1.0};
    }
    static DistributionSpec log_rho(double r, double s, double scale = 1.0) {
        return {Kind::log_rho, r, s, scale};
    }

    std::string name() const {
        switch (kind) {
            case Kind::exponential: return "exponential(rate=" + detail::format_num(a) + ")";
            case Kind::lognormal:
                return "lognormal(mu=" + detail::format_num(a) +
                       ",sigma=" + detail::format_num(b) + ")";
            case Kind::log_rho:
            default:
                return "logrho(r=" + detail::format_num(a) + ",s=" + detail::format_num(b) + ")";
        }
    }

    // E[X^p].
    double moment(double p) const {
        double base;
        switch (kind) {
            case Kind::exponential:
                base = std::tgamma(p + 1.0) * std::pow(a, -p);
                break;
            case Kind::lognormal:
                base = std::exp(p * a + 0.5 * p * p * b * b);
                break;
            case Kind::log_rho:
            default:
                base = expect_logp_rho_quadrature(a, b, p).mean;
                break;
        }
        return std::pow(scale, p) * base;
    }

    double sample(const CounterRng& rng, std::uint64_t i) const {
        switch (kind) {
            case Kind::exponential: return scale * rng.exponential(i, a);
            case Kind::lognormal: return scale * rng.lognormal(i, a, b);
            case Kind::log_rho:
            default: return scale * log_inv_rho_polar(1.0 - a, 1.0 - b, rng.angle(i));
        }
    }
};

// Moment inequality for sums of independent nonnegative variables:
// E[(sum X)^p] <= 2^{p^2} max{sum E[X^p], (sum E[X])^p}. Both sides are
// estimated from the same draws; the closed-form right side is carried as
// bound_ref so tests can cross-check the sampler.
inline LemmaVerdict rosenthal_check(const DistributionSpec& spec, unsigned k, double p,
                                    std::size_t n, std::uint64_t seed) {
    if (k < 1 || k > 64) throw std::invalid_argument("rosenthal_check: k must be in 1..64");
    if (!(p > 1.0)) throw std::invalid_argument("rosenthal_check: p must be > 1");
    if (n < 2) throw std::invalid_argument("rosenthal_check: need n >= 2 replicates");
    const CounterRng rng(CounterRng::derive(seed, stream::kRosenthal));
    std::vector<double> lhs_pow(n);
    std::vector<double> pooled(n * k);
    std::vector<double> pooled_pow(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (unsigned j = 0; j < k; ++j) {
            const double x = spec.sample(rng, i * k + j);
            pooled[i * k + j] = x;
            pooled_pow[i * k + j] = std::pow(x, p);
            sum += x;
        }
        lhs_pow[i] = std::pow(sum, p);
    }
    double lhs, lhs_se, e1, e1_se, ep, ep_se;
    detail::mean_and_se(std::move(lhs_pow), lhs, lhs_se);
    detail::mean_and_se(std::move(pooled), e1, e1_se);
    detail::mean_and_se(std::move(pooled_pow), ep, ep_se);

    const double scale = std::pow(2.0, p * p);
    const double kd = static_cast<double>(k);
    const double term_p = kd * ep;
    const double term_1 = std::pow(kd * e1, p);
    double rhs_core, rhs_core_se;
    if (term_p >= term_1) {
        rhs_core = term_p;
        rhs_core_se = kd * ep_se;
    } else {
        rhs_core = term_1;
        rhs_core_se = p * std::pow(kd * e1, p - 1.0) * kd * e1_se;
    }
    const double rhs = scale * rhs_core;
    const double rhs_se = scale * rhs_core_se;
    const double combined = std::hypot(lhs_se, rhs_se);
    const double rhs_closed =
        scale * std::max(kd * spec.moment(p), std::pow(kd * spec.moment(1.0), p));

    const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
    const bool pass = finite && lhs <= rhs + 3.0 * combined;

    LemmaVerdict v;
    v.lemma_id = "rosenthal";
    v.grid = spec.name() + ", k=" + std::to_string(k) + ", p=" + detail::format_num(p) +
             ", n=" + std::to_string(n);
    v.bound_constant = 1.0;
    const double denom = rhs + 3.0 * combined;
    BatteryRow row{"rosenthal:" + spec.name(),
                   p,
                   static_cast<double>(k),
                   0.0,
                   "monte_carlo",
                   lhs,
                   combined,
                   rhs_closed,
                   denom > 0.0 ? lhs / denom : std::numeric_limits<double>::infinity(),
                   pass};
    v.rows.push_back(row);
    v.ratios.push_back(row.ratio);
    v.pass = pass;
    return v;
}

// Standard battery: closed-moment families crossed with sum lengths and
// exponents. All configurations must satisfy the inequality.
inline std::vector<LemmaVerdict> rosenthal_battery(std::size_t n = 20000, std::uint64_t seed = 0) {
    const std::vector<DistributionSpec> specs = {DistributionSpec::exponential(1.0),
                                                 DistributionSpec::lognormal(0.0, 1.0)};
    const std::vector<unsigned> ks = {2, 16, 64};
    const std::vector<double> ps = {1.5, 2.0, 3.0};
    std::vector<LemmaVerdict> out;
    std::uint64_t task = 0;
    for (const auto& spec : specs)
        for (unsigned k : ks)
            for (double p : ps)
                out.push_back(rosenthal_check(spec, k, p, n, CounterRng::derive(seed, ++task)));
    return out;
}

// Random-measure battery for the balayage bound: atoms drawn from the
// kMeasures stream, weights rescaled so ||B mu||_q = 1 (balayage is linear in
// the weights), then S = sum alpha^q (1-|lambda|)^{1-q} recorded. The
// empirical max over the battery is the observed constant.
struct AlphaLambdaBattery {
    std::vector<AlphaLambdaCheck> checks;
    double max_weighted_sum = 0.0;
    bool all_normalized = true;
};

inline AlphaLambdaBattery alpha_lambda_battery(std::size_t measures, std::size_t atoms, double q,
                                               std::uint64_t seed,
                                               const QuadratureOptions& opt = {}) {
    if (!(q > 1.0)) throw std::invalid_argument("alpha_lambda_battery: q must be > 1");
    const CounterRng rng(CounterRng::derive(seed, stream::kMeasures));
    AlphaLambdaBattery out;
    std::uint64_t ctr = 0;
    for (std::size_t m = 0; m < measures; ++m) {
        DiscreteMeasure mu;
        for (std::size_t j = 0; j < atoms; ++j) {
            const double r = 0.999 * rng.u01(ctr++);
            const double th = rng.angle(ctr++);
            const double w = 0.5 + 0.5 * rng.u01(ctr++);  // keep weights away from 0
            mu.atoms.emplace_back(DiskPoint::from_polar(r, th), w);
        }
        const auto norm_pow = balayage_lq_norm_pow(mu, q, opt);
        const double norm = std::pow(norm_pow.value, 1.0 / q);
        for (auto& [z, w] : mu.atoms) w /= norm;
        auto check = alpha_lambda_check(mu, q, opt);
        out.all_normalized = out.all_normalized && std::abs(check.balayage_norm - 1.0) <= 1e-6;
        out.max_weighted_sum = std::max(out.max_weighted_sum, check.weighted_sum);
        out.checks.push_back(std::move(check));
    }
    return out;
}

// Truncation study of the weighted counting sums X_p: per-seed increments
// over (N/2, N] windows accumulated from the true per-point deltas, never by
// differencing totals (late deltas sit far below one ulp of the total).
struct CriterionWindow {
    std::size_t checkpoint = 0;
    double driver_own = 0.0;    // (n-1)(1-r_n) at the window's last point
    double tail_weight = 0.0;   // sum of gaps beyond the checkpoint
    double median_sum = 0.0;
    double median_increment = 0.0;
    double min_increment = 0.0;
    double max_increment = 0.0;
};

struct CriterionDistribution {
    double p = 1.0;
    std::vector<std::size_t> checkpoints;
    std::vector<std::vector<double>> sums;        // [seed][checkpoint]
    std::vector<std::vector<double>> increments;  // [seed][checkpoint], window (c/2, c]
    std::vector<CriterionWindow> windows;
    bool median_increments_decreasing = false;
    bool increments_positive = false;
};

inline std::vector<CriterionDistribution> criterion_distribution(
    const RadiusProfile& profile, const std::vector<double>& p_list,
    const std::vector<std::uint64_t>& seeds, const std::vector<std::size_t>& checkpoints,
    unsigned threads = 1) {
    if (p_list.empty() || seeds.empty() || checkpoints.empty())
        throw std::invalid_argument("criterion_distribution: empty inputs");
    for (double p : p_list)
        if (!(p >= 1.0)) throw std::invalid_argument("criterion_distribution: p must be >= 1");
    std::vector<std::size_t> cks = checkpoints;
    std::sort(cks.begin(), cks.end());
    if (cks.front() < 2)
        throw std::invalid_argument("criterion_distribution: checkpoints must be >= 2");

    // Record points: every checkpoint and its half, so each (c/2, c] window
    // is a union of record-to-record segments.
    std::vector<std::size_t> record;
    for (std::size_t c : cks) {
        record.push_back(c);
        record.push_back(c / 2);
    }
    std::sort(record.begin(), record.end());
    record.erase(std::unique(record.begin(), record.end()), record.end());
    const std::size_t n_max = cks.back();

    const auto radii = make_radii(profile);
    if (radii.gap.size() < n_max)
        throw std::invalid_argument("criterion_distribution: profile shorter than checkpoints");

    const std::size_t np = p_list.size();
    const std::size_t ns = seeds.size();
    // segment sums per (p, seed, record segment)
    std::vector<std::vector<std::vector<double>>> seg(np,
        std::vector<std::vector<double>>(ns, std::vector<double>(record.size(), 0.0)));

    parallel_for(ns, threads, [&](std::size_t si) {
        std::vector<double> gaps(radii.gap.begin(),
                                 radii.gap.begin() + static_cast<std::ptrdiff_t>(n_max));
        const CounterRng rng(CounterRng::derive(seeds[si], stream::kAngles));
        std::vector<double> theta(n_max);
        for (std::size_t n = 0; n < n_max; ++n) theta[n] = rng.angle(n);
        const auto sums = criterion_segment_sums(gaps, theta, p_list, record);
        for (std::size_t pi = 0; pi < np; ++pi) seg[pi][si] = sums[pi];
    });

    // Deterministic drivers, shared across seeds.
    std::vector<double> tail_at(cks.size(), 0.0);
    std::vector<double> driver_at(cks.size(), 0.0);
    for (std::size_t ci = 0; ci < cks.size(); ++ci) {
        const std::size_t c = cks[ci];
        std::vector<double> tail(radii.gap.begin() + static_cast<std::ptrdiff_t>(c),
                                 radii.gap.end());
        tail_at[ci] = sorted_pairwise_sum(std::move(tail));
        driver_at[ci] = static_cast<double>(c - 1) * radii.gap[c - 1];
    }

    std::vector<CriterionDistribution> out;
    for (std::size_t pi = 0; pi < np; ++pi) {
        CriterionDistribution dist;
        dist.p = p_list[pi];
        dist.checkpoints = cks;
        dist.sums.assign(ns, std::vector<double>(cks.size(), 0.0));
        dist.increments.assign(ns, std::vector<double>(cks.size(), 0.0));
        for (std::size_t si = 0; si < ns; ++si) {
            for (std::size_t ci = 0; ci < cks.size(); ++ci) {
                const std::size_t c = cks[ci];
                const std::size_t half = c / 2;
                std::vector<double> upto, window;
                for (std::size_t ri = 0; ri < record.size(); ++ri) {
                    if (record[ri] <= c) upto.push_back(seg[pi][si][ri]);
                    if (record[ri] > half && record[ri] <= c)
                        window.push_back(seg[pi][si][ri]);
                }
                dist.sums[si][ci] = sorted_pairwise_sum(std::move(upto));
                dist.increments[si][ci] = sorted_pairwise_sum(std::move(window));
            }
        }
        bool positive = true;
        for (std::size_t ci = 0; ci < cks.size(); ++ci) {
            CriterionWindow w;
            w.checkpoint = cks[ci];
            w.driver_own = driver_at[ci];
            w.tail_weight = tail_at[ci];
            std::vector<double> col_sum(ns), col_inc(ns);
            for (std::size_t si = 0; si < ns; ++si) {
                col_sum[si] = dist.sums[si][ci];
                col_inc[si] = dist.increments[si][ci];
            }
            w.median_sum = median_of(col_sum);
            w.median_increment = median_of(col_inc);
            w.min_increment = *std::min_element(col_inc.begin(), col_inc.end());
            w.max_increment = *std::max_element(col_inc.begin(), col_inc.end());
            positive = positive && w.min_increment > 0.0;
            dist.windows.push_back(w);
        }
        bool decreasing = true;
        for (std::size_t ci = 1; ci < dist.windows.size(); ++ci)
            decreasing =
                decreasing && dist.windows[ci].median_increment <
                                  dist.windows[ci - 1].median_increment;
        dist.median_increments_decreasing = decreasing && dist.windows.size() > 1;
        dist.increments_positive = positive;
        out.push_back(std::move(dist));
    }
    return out;
}

// Exact-arithmetic driver pair at one truncation index (1-indexed).
struct DriverPair {
    double own = 0.0;   // (n-1)(1-r_n)
    double tail = 0.0;  // sum_{m > n} (1-r_m) within the profile
};

inline DriverPair main_proof_drivers(const RadiusProfile& profile, std::size_t n) {
    const auto radii = make_radii(profile);
    if (n < 1 || n > radii.gap.size())
        throw std::invalid_argument("main_proof_drivers: index out of range");
    DriverPair d;
    d.own = static_cast<double>(n - 1) * radii.gap[n - 1];
    std::vector<double> tail(radii.gap.begin() + static_cast<std::ptrdiff_t>(n), radii.gap.end());
    d.tail = sorted_pairwise_sum(std::move(tail));
    return d;
}

}  // namespace steinlab
