#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steinlab/disk_geometry.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

enum class ProfileKind { geometric, power, dyadic_counts, explicit_list };

// Per-annulus point counts for the dyadic kind: N_n = n, N_n = const,
// or an explicit list (levels beyond the list hold zero points).
struct DyadicCountsRule {
    enum class Kind { identity, constant, list } kind = Kind::identity;
    long long constant = 1;
    std::vector<long long> list;

    long long at(int level) const {  // level >= 1
        switch (kind) {
            case Kind::identity: return level;
            case Kind::constant: return constant;
            case Kind::list:
                return level <= static_cast<int>(list.size()) ? list[level - 1] : 0;
        }
        return 0;
    }
};

struct RadiusProfile {
    ProfileKind kind = ProfileKind::geometric;
    double q = 0.5;        // geometric: 1 - r_n = q^n
    double c = 1.0;        // power: 1 - r_n = c * n^-beta
    double beta = 2.0;
    DyadicCountsRule counts;  // dyadic_counts
    int levels = 1;           // dyadic_counts: number of annulus levels
    std::vector<double> explicit_radii;
    std::size_t count = 0;  // number of points (for dyadic: derived from counts)
    std::string spec;       // original spec string, echoed into reports

    // Whether sum (1 - r_n) converges for the infinite extension of the
    // profile. Symbolic per kind; explicit lists cannot witness a tail.
    bool tail_convergent() const {
        switch (kind) {
            case ProfileKind::geometric: return true;  // sum q^n, 0 < q < 1
            case ProfileKind::power: return beta > 1.0;
            case ProfileKind::dyadic_counts:
                // ratio test on N_n 2^-n with the supplied counts:
                // identity -> (n+1)/(2n) -> 1/2; constant -> 1/2; a finite
                // list has an eventually-zero tail.
                return true;
            case ProfileKind::explicit_list: return false;
        }
        return false;
    }
};

// Radii and their boundary gaps. Gaps are the exact profile values (may be
// subnormal or underflow to 0); radii are clamped below 1 for point export.
struct RadiiData {
    std::vector<double> radius;
    std::vector<double> gap;
    std::size_t size() const { return radius.size(); }
};

inline RadiiData make_radii(const RadiusProfile& profile) {
    RadiiData out;
    auto push_gap = [&out](double gap) {
        if (gap > 1.0) gap = 1.0;
        if (gap < 0.0) gap = 0.0;
        double r = 1.0 - gap;
        if (r >= 1.0) r = max_radius_below_one();
        if (r < 0.0) r = 0.0;
        out.gap.push_back(gap);
        out.radius.push_back(r);
    };
    switch (profile.kind) {
        case ProfileKind::geometric: {
            if (!(profile.q > 0.0 && profile.q < 1.0))
                throw std::invalid_argument("geometric profile: q must be in (0, 1)");
            double g = 1.0;
            for (std::size_t n = 1; n <= profile.count; ++n) {
                g *= profile.q;  // exact for q = 1/2 until underflow
                push_gap(g);
            }
            break;
        }
        case ProfileKind::power: {
            if (!(profile.c > 0.0) || !(profile.beta > 0.0))
                throw std::invalid_argument("power profile: c and beta must be positive");
            for (std::size_t n = 1; n <= profile.count; ++n)
                push_gap(profile.c * std::pow(static_cast<double>(n), -profile.beta));
            break;
        }
        case ProfileKind::dyadic_counts: {
            if (profile.levels < 1)
                throw std::invalid_argument("dyadic profile: levels must be >= 1");
            for (int n = 1; n <= profile.levels; ++n) {
                const long long k = profile.counts.at(n);
                if (k < 0) throw std::invalid_argument("dyadic profile: counts must be >= 0");
                const double g = std::ldexp(0.75, -n);  // annulus-n midpoint gap
                for (long long j = 0; j < k; ++j) push_gap(g);
            }
            break;
        }
        case ProfileKind::explicit_list: {
            std::vector<double> rs = profile.explicit_radii;
            std::sort(rs.begin(), rs.end());
            for (double r : rs) {
                if (!(r >= 0.0) || !(r < 1.0))
                    throw std::invalid_argument("explicit profile: radii must be in [0, 1)");
                push_gap(1.0 - r);
            }
            break;
        }
    }
    return out;
}

// Total number of points the profile yields (dyadic: sum of counts).
inline std::size_t profile_point_count(const RadiusProfile& profile) {
    if (profile.kind == ProfileKind::dyadic_counts) {
        long long total = 0;
        for (int n = 1; n <= profile.levels; ++n) total += profile.counts.at(n);
        return static_cast<std::size_t>(total);
    }
    if (profile.kind == ProfileKind::explicit_list) return profile.explicit_radii.size();
    return profile.count;
}

// Profile spec grammar:
//   geometric:q=0.5,N=200 | power:c=1,beta=2,N=500 |
//   dyadic:counts=n,N=140 | explicit:file=radii.csv
// For dyadic, N is the number of annulus levels. counts accepts `n`, an
// integer constant, or a semicolon list `1;2;4`.
inline RadiusProfile parse_profile(const std::string& spec) {
    RadiusProfile p;
    p.spec = spec;
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(pos, comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::invalid_argument("profile spec: expected key=value, got '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
            pos = comma + 1;
        }
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("profile spec: missing ") + key);
        return it->second;
    };
    auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("profile spec: bad number '" + s + "'");
        return v;
    };
    auto to_count = [&](const std::string& s) {
        const double v = to_double(s);
        if (!(v >= 0.0) || v != std::floor(v) || v > 5e7)
            throw std::invalid_argument("profile spec: bad count '" + s + "'");
        return static_cast<long long>(v);
    };

    if (head == "geometric") {
        p.kind = ProfileKind::geometric;
        p.q = to_double(need("q"));
        p.count = static_cast<std::size_t>(to_count(need("N")));
        if (!(p.q > 0.0 && p.q < 1.0))
            throw std::invalid_argument("profile spec: geometric q must be in (0, 1)");
    } else if (head == "power") {
        p.kind = ProfileKind::power;
        if (kv.count("c")) p.c = to_double(kv.at("c"));
        p.beta = to_double(need("beta"));
        p.count = static_cast<std::size_t>(to_count(need("N")));
        if (!(p.c > 0.0) || !(p.beta > 0.0))
            throw std::invalid_argument("profile spec: power c, beta must be positive");
    } else if (head == "dyadic") {
        p.kind = ProfileKind::dyadic_counts;
        const std::string& cs = need("counts");
        if (cs == "n") {
            p.counts.kind = DyadicCountsRule::Kind::identity;
        } else if (cs.find(';') != std::string::npos) {
            p.counts.kind = DyadicCountsRule::Kind::list;
            std::size_t pos = 0;
            while (pos <= cs.size()) {
                auto semi = cs.find(';', pos);
                if (semi == std::string::npos) semi = cs.size();
                p.counts.list.push_back(to_count(cs.substr(pos, semi - pos)));
                pos = semi + 1;
            }
        } else {
            p.counts.kind = DyadicCountsRule::Kind::constant;
            p.counts.constant = to_count(cs);
        }
        p.levels = static_cast<int>(to_count(need("N")));
        if (p.levels < 1) throw std::invalid_argument("profile spec: dyadic N must be >= 1");
        p.count = profile_point_count(p);
    } else if (head == "explicit") {
        p.kind = ProfileKind::explicit_list;
        const std::string& path = need("file");
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("profile spec: cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            std::size_t first = line.find_first_not_of(' ');
            if (first == std::string::npos) continue;
            p.explicit_radii.push_back(to_double(line.substr(first)));
        }
        if (p.explicit_radii.empty())
            throw std::invalid_argument("profile spec: no radii in " + path);
        p.count = p.explicit_radii.size();
    } else {
        throw std::invalid_argument("profile spec: unknown kind '" + head + "'");
    }
    return p;
}

struct BlaschkeSummary {
    double sum = 0.0;          // sum of (1 - r_n) over the truncation
    bool tail_convergent = false;
};

inline BlaschkeSummary blaschke_sum(const RadiusProfile& profile, const RadiiData& radii) {
    BlaschkeSummary s;
    s.sum = pairwise_sum(radii.gap);
    s.tail_convergent = profile.tail_convergent();
    return s;
}

// A Steinhaus sample: the profile's radii with i.i.d. uniform angles.
struct SequenceSample {
    RadiusProfile profile;
    std::uint64_t seed = 0;
    std::vector<double> radius;
    std::vector<double> gap;
    std::vector<double> theta;
    std::vector<DiskPoint> points;
    std::size_t size() const { return points.size(); }
};

namespace stream {
// Substream indices hung off the master seed (see README).
inline constexpr std::uint64_t kAngles = 1;
inline constexpr std::uint64_t kMonteCarlo = 2;
inline constexpr std::uint64_t kRosenthal = 3;
inline constexpr std::uint64_t kMeasures = 4;
}  // namespace stream

inline SequenceSample sample_sequence(const RadiusProfile& profile, std::uint64_t seed) {
    SequenceSample s;
    s.profile = profile;
    s.seed = seed;
    auto radii = make_radii(profile);
    s.radius = std::move(radii.radius);
    s.gap = std::move(radii.gap);
    const CounterRng rng(CounterRng::derive(seed, stream::kAngles));
    s.theta.resize(s.radius.size());
    s.points.reserve(s.radius.size());
    for (std::size_t n = 0; n < s.radius.size(); ++n) {
        s.theta[n] = rng.angle(n);
        s.points.push_back(DiskPoint::from_polar(s.radius[n], s.theta[n]));
    }
    return s;
}

// Occupation counts of the dyadic annuli, plus the weighted sum N_n 2^-n
// that brackets the Blaschke sum within a factor of 2.
struct DyadicCounts {
    std::vector<std::pair<int, long long>> counts;  // (annulus index, N_n), index ascending
    double weighted_sum = 0.0;                      // sum N_n 2^-n
};

inline DyadicCounts dyadic_counts(const SequenceSample& sample) {
    std::map<int, long long> acc;
    for (double g : sample.gap) ++acc[annulus_index_from_gap(g)];
    DyadicCounts out;
    std::vector<double> terms;
    for (const auto& [idx, cnt] : acc) {
        out.counts.emplace_back(idx, cnt);
        terms.push_back(static_cast<double>(cnt) * std::ldexp(1.0, -idx));
    }
    out.weighted_sum = pairwise_sum(terms);
    return out;
}

}  // namespace steinlab
