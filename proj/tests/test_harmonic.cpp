#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "steinlab/blaschke_analytics.hpp"
#include "steinlab/harmonic_majorants.hpp"
#include "steinlab/random_sequences.hpp"

using namespace steinlab;

TEST_CASE("poisson kernel closed values") {
    // P_z(theta) at theta = arg z is (1+r)/(1-r); at the antipode (1-r)/(1+r)
    for (double r : {0.0, 0.3, 0.9, 0.999}) {
        auto z = DiskPoint::from_polar(r, 0.7);
        CHECK(poisson_kernel(z, 0.7) == Catch::Approx((1 + r) / (1 - r)).epsilon(1e-12));
        CHECK(poisson_kernel(z, 0.7 + kPi) == Catch::Approx((1 - r) / (1 + r)).epsilon(1e-12));
    }
    // kernel integrates to one over the circle
    auto z = DiskPoint::from_polar(0.9, 1.3);
    auto mean = integrate_circle_mean([&](double t) { return poisson_kernel(z, t); }, {1.3},
                                      1e-6);
    CHECK(mean.value == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(mean.converged);
}

TEST_CASE("poisson L^q norms") {
    QuadratureOptions opt;
    // q = 1: the kernel is positive with mean one
    auto z = DiskPoint::from_polar(0.99, 0.0);
    CHECK(poisson_lq_norm(z, 1.0, opt).value == Catch::Approx(1.0).epsilon(1e-9));
    // q = 2: Parseval gives ||P_z||_2^2 = (1 + r^2)/(1 - r^2)
    for (double r : {0.5, 0.9, 0.99, 0.9999}) {
        auto zz = DiskPoint::from_polar(r, 0.4);
        auto n2 = poisson_lq_norm_pow(zz, 2.0, opt);
        CHECK(n2.value == Catch::Approx((1 + r * r) / (1 - r * r)).epsilon(1e-8));
        CHECK(n2.converged);
    }
    // the norm grows like (1-r)^{(1-q)/q}: product against the growth factor
    // stays within a constant band as r -> 1
    for (double q : {1.5, 3.0}) {
        double lo = 1e300, hi = 0.0;
        for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
            auto zq = DiskPoint::from_polar(1.0 - gap, 0.0);
            const double norm = poisson_lq_norm(zq, q, opt).value;
            const double scaled = std::pow(gap, (q - 1.0) / q) * norm;
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        CHECK(hi / lo < 4.0);
    }
    CHECK_THROWS_AS(poisson_lq_norm_pow(z, 0.5, opt), std::invalid_argument);
}

TEST_CASE("step function norms") {
    StepFunction psi;
    psi.terms.push_back({BoundaryArc{0.0, 0.5}, 2.0});
    psi.terms.push_back({BoundaryArc{0.25, 0.5}, 3.0});  // overlaps the first
    // L1: sum of weight * measure regardless of overlap
    CHECK(psi.norm_l1() == Catch::Approx((2.0 * 0.5 + 3.0 * 0.5) / kPi).epsilon(1e-14));
    // L2^2 by hand: value 2 on [-0.5,-0.25), 5 on [-0.25, 0.5), 3 on [0.5, 0.75)
    const double by_hand =
        (4.0 * 0.25 + 25.0 * 0.75 + 9.0 * 0.25) / kTwoPi;
    CHECK(psi.norm_lp_pow(2.0) == Catch::Approx(by_hand).epsilon(1e-12));
    CHECK(psi.norm_lp(1.0) == Catch::Approx(psi.norm_l1()).epsilon(1e-12));
    // values at sample angles
    CHECK(psi.value_at(0.0) == 5.0);
    CHECK(psi.value_at(-0.3) == 2.0);
    CHECK(psi.value_at(0.6) == 3.0);
    CHECK(psi.value_at(kPi) == 0.0);
    // a full-circle term shifts everything up
    psi.terms.push_back({BoundaryArc{0.0, kPi}, 1.0});
    CHECK(psi.value_at(kPi) == 1.0);
    CHECK(psi.norm_l1() == Catch::Approx((2.0 * 0.5 + 3.0 * 0.5) / kPi + 1.0).epsilon(1e-14));
    // wrap-around arc splits cleanly at the seam
    StepFunction wrap;
    wrap.terms.push_back({BoundaryArc{kPi - 0.1, 0.3}, 1.0});
    CHECK(wrap.norm_lp_pow(1.0) == Catch::Approx(0.6 / kTwoPi).epsilon(1e-12));
    CHECK(wrap.value_at(-kPi + 0.1) == 1.0);
}

TEST_CASE("balayage of a discrete measure") {
    DiscreteMeasure mu;
    mu.atoms.push_back({DiskPoint::from_polar(0.5, 0.0), 2.0});
    mu.atoms.push_back({DiskPoint::from_polar(0.9, 2.0), 0.5});
    CHECK(mu.mass() == 2.5);
    // peak value at the first atom's direction
    const double v0 = balayage_value(mu, 0.0);
    CHECK(v0 >= 2.0 * 3.0);  // first atom alone contributes (1+r)/(1-r) = 3
    // the balayage integrates to the total mass
    auto total = integrate_circle_mean([&](double t) { return balayage_value(mu, t); },
                                       {0.0, 2.0}, 1e-8);
    CHECK(total.value == Catch::Approx(mu.mass()).epsilon(1e-9));
    // L^q norm bound pairing
    auto chk = alpha_lambda_check(mu, 2.0);
    CHECK(chk.balayage_norm > 1.0);  // this mu is not normalized
    CHECK_FALSE(chk.norm_within_unit);
    const double s_expect = 4.0 * std::pow(0.5, -1.0) + 0.25 * std::pow(0.1, -1.0);
    CHECK(chk.weighted_sum == Catch::Approx(s_expect).epsilon(1e-12));
}

TEST_CASE("single atom balayage norm matches the kernel norm") {
    DiscreteMeasure mu;
    mu.atoms.push_back({DiskPoint::from_polar(0.99, 1.0), 1.0});
    for (double q : {1.5, 2.0}) {
        auto norm = balayage_lq_norm_pow(mu, q);
        auto direct = poisson_lq_norm_pow(mu.atoms[0].first, q);
        CHECK(norm.value == Catch::Approx(direct.value).epsilon(1e-9));
    }
}

TEST_CASE("psi majorant certifies phi on the sample") {
    auto p = parse_profile("geometric:q=0.5,N=200");
    auto s = sample_sequence(p, 1);
    auto table = phi_lambda(s);
    auto cert = certify_majorant(table, 2.0);
    CHECK(cert.valid);
    CHECK(cert.min_margin >= -kMarginTolerance);
    CHECK(cert.sup_k < 8.0);
    CHECK(std::isfinite(cert.psi_l1));
    CHECK(std::isfinite(cert.psi_lp));
    CHECK(cert.margins.size() == table.size());
    // L1 norm of psi is bounded by sup K times X_1 / pi: each arc has
    // measure gap/pi and weight K phi
    const double x1 = criterion_sum(table, 1.0);
    CHECK(cert.psi_l1 <= cert.sup_k * x1 / kPi * (1.0 + 1e-12));
}

TEST_CASE("psi construction details") {
    // single point: P[psi](lambda) = K phi omega = phi exactly, margin 0
    auto s2 = sample_sequence(parse_profile("geometric:q=0.5,N=2"), 11);
    auto table2 = phi_lambda(s2);
    auto data = build_psi(table2);
    REQUIRE(data.psi.terms.size() == 2);
    for (std::size_t j = 0; j < data.entry.size(); ++j) {
        const auto& e = table2.entries[data.entry[j]];
        const double om = harmonic_measure_polar(e.gap, e.theta, data.psi.terms[j].arc);
        CHECK(data.k_factor[j] == Catch::Approx(1.0 / om).epsilon(1e-14));
        // the term alone reproduces phi at its own point
        CHECK(data.psi.terms[j].weight * om == Catch::Approx(e.value).epsilon(1e-13));
    }
    // a point at the origin follows the same rule: half-length-1 arc, K = pi.
    // Harmonic measure from the center is uniform, so omega = 1/pi there, and
    // the term's L1 mass stays at K * phi / pi as the norm bound requires.
    SequenceSample org;
    org.radius = {0.0, 0.5};
    org.gap = {1.0, 0.5};
    org.theta = {0.0, 1.0};
    org.points = {DiskPoint{}, DiskPoint::from_polar(0.5, 1.0)};
    auto torg = phi_lambda(org);
    auto dorg = build_psi(torg);
    REQUIRE(dorg.psi.terms.size() == 2);
    CHECK(dorg.k_factor[0] == Catch::Approx(kPi).epsilon(1e-14));
    CHECK(dorg.psi.terms[0].arc.half_length == 1.0);
    // margins are nonnegative for the pair
    auto cert = certify_majorant(torg, 1.0);
    CHECK(cert.valid);
    // infinite phi rejects construction
    SequenceSample dup;
    dup.radius = {0.5, 0.5};
    dup.gap = {0.5, 0.5};
    dup.theta = {1.0, 1.0};
    dup.points = {DiskPoint::from_polar(0.5, 1.0), DiskPoint::from_polar(0.5, 1.0)};
    CHECK_THROWS_AS(build_psi(phi_lambda(dup)), std::invalid_argument);
}

TEST_CASE("poisson extension of a step function matches quadrature") {
    StepFunction psi;
    psi.terms.push_back({BoundaryArc{0.2, 0.4}, 1.5});
    psi.terms.push_back({BoundaryArc{-1.0, 0.05}, 4.0});
    auto z = DiskPoint::from_polar(0.95, 0.3);
    const double closed = poisson_extension_step(psi, z);
    auto quad = integrate_circle_mean(
        [&](double t) { return poisson_kernel(z, t) * psi.value_at(t); },
        {0.3, 0.2 - 0.4, 0.2 + 0.4, -1.0 - 0.05, -1.0 + 0.05}, 1e-8);
    CHECK(closed == Catch::Approx(quad.value).margin(1e-9));
    // harmonic majorization: extension at the origin equals the mean
    CHECK(poisson_extension_step(psi, DiskPoint{}) ==
          Catch::Approx(psi.norm_l1()).epsilon(1e-13));
}

TEST_CASE("margins hold across profiles and seeds") {
    for (const char* spec : {"geometric:q=0.5,N=60", "dyadic:counts=n,N=10",
                             "power:beta=2,N=60"}) {
        for (std::uint64_t seed : {2u, 3u}) {
            auto s = sample_sequence(parse_profile(spec), seed);
            auto table = phi_lambda(s);
            auto certs = certify_majorant_many(table, {1.0, 2.0}, 2);
            for (const auto& c : certs) {
                CHECK(c.valid);
                CHECK(c.min_margin >= -kMarginTolerance);
                CHECK(c.sup_k < 8.0);
            }
            // both p share one psi: identical margins and L1 norms
            CHECK(certs[0].min_margin == certs[1].min_margin);
            CHECK(certs[0].psi_l1 == certs[1].psi_l1);
        }
    }
}
