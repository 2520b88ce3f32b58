#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "steinlab/numerics.hpp"

namespace steinlab {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;   // estimated, always reported
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
// Machine-precision for the small orders used here.
template <int N>
struct GaussLegendre {
    std::array<double, N> node{};
    std::array<double, N> weight{};

    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < N; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = N * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }
};

inline const GaussLegendre<7>& gl7() {
    static const GaussLegendre<7> g;
    return g;
}
inline const GaussLegendre<15>& gl15() {
    static const GaussLegendre<15> g;
    return g;
}

template <int N, typename F>
double gl_apply(const GaussLegendre<N>& g, F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += g.weight[i] * f(mid + half * g.node[i]);
    return acc * half;
}

struct Segment {
    double a, b;
    double value;  // GL15 estimate
    double error;  // |GL15 - GL7|
};

struct SegmentWorse {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie-break
    }
};

}  // namespace detail

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_evaluations = std::size_t{1} << 20;
};

// Globally adaptive integration of f over the panels given by breakpoints
// (ascending, at least two entries). Worst-error panel is bisected until the
// summed error estimate meets tolerance or the evaluation budget runs out.
// Deterministic: heap order ties break on panel position.
template <typename F>
QuadratureResult integrate_adaptive(F f, const std::vector<double>& breakpoints,
                                    const QuadratureOptions& opt = {}) {
    QuadratureResult res;
    const auto& g7 = detail::gl7();
    const auto& g15 = detail::gl15();

    auto make_segment = [&](double a, double b) {
        detail::Segment s;
        s.a = a;
        s.b = b;
        s.value = detail::gl_apply(g15, f, a, b);
        const double coarse = detail::gl_apply(g7, f, a, b);
        s.error = std::abs(s.value - coarse);
        res.evaluations += 22;
        return s;
    };

    std::priority_queue<detail::Segment, std::vector<detail::Segment>, detail::SegmentWorse> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) continue;
        auto s = make_segment(breakpoints[i], breakpoints[i + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

    while (!heap.empty() && total_err > tolerance() && res.evaluations + 44 <= opt.max_evaluations) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {  // panel at double resolution
            total_err -= worst.error;             // cannot improve further
            continue;
        }
        auto left = make_segment(worst.a, mid);
        auto right = make_segment(mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Recompute sums pairwise over the surviving panels for a stable total.
    std::vector<double> vals, errs;
    vals.reserve(heap.size());
    errs.reserve(heap.size());
    while (!heap.empty()) {
        vals.push_back(heap.top().value);
        errs.push_back(heap.top().error);
        heap.pop();
    }
    res.value = sorted_pairwise_sum(std::move(vals));
    res.abs_error = sorted_pairwise_sum(std::move(errs));
    res.converged = res.abs_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
    return res;
}

template <typename F>
QuadratureResult integrate_adaptive(F f, double a, double b, const QuadratureOptions& opt = {}) {
    return integrate_adaptive(std::move(f), std::vector<double>{a, b}, opt);
}

// Breakpoints for one period [base, base + 2*pi] with geometric panel
// subdivision around each listed singular/peaked angle, starting from
// panels of width `min_width` next to the singularity and doubling outward.
inline std::vector<double> periodic_breakpoints(double base, const std::vector<double>& singular,
                                                double min_width) {
    std::vector<double> xs{base, base + kTwoPi};
    min_width = std::max(min_width, 1e-300);
    for (double s : singular) {
        // place the singular angle inside [base, base + 2*pi)
        double s0 = base + wrap_angle_positive(s - base);
        for (int dir : {-1, +1}) {
            double w = min_width;
            double x = s0;
            while (true) {
                x = s0 + dir * w;
                if (x <= base || x >= base + kTwoPi) break;
                xs.push_back(x);
                if (w > kTwoPi) break;
                w *= 2.0;
            }
        }
        if (s0 > base && s0 < base + kTwoPi) xs.push_back(s0);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// Mean of f over the circle: (1/2pi) * integral over one period.
// `singular` lists angles where f is peaked or log-singular.
template <typename F>
QuadratureResult integrate_circle_mean(F f, const std::vector<double>& singular, double min_width,
                                       const QuadratureOptions& opt = {}) {
    const double base = singular.empty() ? 0.0 : singular.front() + kPi;
    auto bp = periodic_breakpoints(base, singular, min_width);
    auto res = integrate_adaptive(std::move(f), bp, opt);
    res.value /= kTwoPi;
    res.abs_error /= kTwoPi;
    return res;
}

}  // namespace steinlab
