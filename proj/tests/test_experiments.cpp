#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oscillab/checks.hpp"
#include "oscillab/experiments.hpp"
#include "oscillab/report.hpp"
#include "oscillab/spectral.hpp"

using namespace oscillab;
using A2 = std::array<double, 2>;

namespace {

OioSpec power_spec(double k, double m, const Grid& g) {
    char pk[32], ak[32];
    std::snprintf(pk, sizeof pk, "power:%.17g", k);
    std::snprintf(ak, sizeof ak, "bessel:%.17g", m);
    return OioSpec{parse_phase(pk, 1), parse_amplitude(ak, 1), g};
}

}  // namespace

TEST_CASE("band norms: multiplier slope equals the amplitude order") {
    // phi = x.xi (pure multiplier <xi>^m): per-band norms are exactly the
    // max of <xi>^m over the band, so the slope recovers m.
    Grid g(1, 64.0, 8192);
    for (double m : {0.0, -1.0}) {
        char ak[32];
        std::snprintf(ak, sizeof ak, "bessel:%.17g", m);
        OioSpec spec{parse_phase("linear", 1), parse_amplitude(ak, 1), g};
        auto rep = estimate_band_norms(spec, 2.0, 2, 7, 4, 11, BandFamily::RandomBand);
        CHECK(std::abs(rep.slope - m) <= 0.05);
    }
}

TEST_CASE("band norms: unimodular phase invisible at p = 2") {
    Grid g(1, 64.0, 8192);
    auto rep = estimate_band_norms(power_spec(2.0, -0.5, g), 2.0, 2, 7, 4, 5,
                                   BandFamily::Chirp);
    CHECK(std::abs(rep.slope - (-0.5)) <= 0.05);
}

TEST_CASE("band norms: chirp family attains the schrodinger rate at p = 1") {
    // k = 2, m = 0: the critical order is m_2(1) = -1, so the band slope
    // should reach 1 = m - m_2(1); box large enough that the band chirps fit.
    Grid g(1, 1024.0, 262144);
    auto rep = estimate_band_norms(power_spec(2.0, 0.0, g), 1.0, 3, 6, 4, 7,
                                   BandFamily::Chirp);
    double target = 0.0 - critical_order(2.0, 1, 1.0);
    CHECK(rep.slope <= target + 0.15);
    CHECK(rep.slope >= target - 0.3);
}

TEST_CASE("band norms: input guards") {
    Grid g(1, 16.0, 256);
    auto spec = power_spec(1.0, 0.0, g);
    CHECK_THROWS(estimate_band_norms(spec, 0.0, 2, 5, 2, 1, BandFamily::Chirp));
    CHECK_THROWS(estimate_band_norms(spec, 2.0, 3, 2, 2, 1, BandFamily::Chirp));
    CHECK_THROWS(estimate_band_norms(spec, 2.0, 2, 9, 2, 1, BandFamily::Chirp));
    CHECK(parse_band_family("random_band") == BandFamily::RandomBand);
    CHECK_THROWS(parse_band_family("nope"));
}

TEST_CASE("monotone evidence: slope difference tracks the amplitude order") {
    Grid g(1, 128.0, 16384);
    for (double k : {0.5, 1.0, 2.0}) {
        for (double p : {1.0, 4.0}) {
            double mc = critical_order(k, 1, p);
            auto rep_hi = estimate_band_norms(power_spec(k, mc + 0.5, g), p, 3, 7, 4, 3,
                                              BandFamily::Chirp);
            auto rep_lo = estimate_band_norms(power_spec(k, mc, g), p, 3, 7, 4, 3,
                                              BandFamily::Chirp);
            INFO("k ", k, " p ", p);
            CHECK(rep_hi.slope - rep_lo.slope >= 0.8 * 0.5 - 0.1);
        }
    }
}

TEST_CASE("sharpness probe: admissibility window") {
    Grid g(1, 64.0, 4096);
    CHECK_THROWS_WITH_AS(sharpness_probe(2, -0.5, 1, -0.1, {4}, g),
                         doctest::Contains("-lambda < n/p - n"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(sharpness_probe(2, -0.5, 1, 0.9, {4}, g),
                         doctest::Contains("nk/2"), std::invalid_argument);
    CHECK_THROWS(sharpness_probe(2, -0.5, 1, 0.1, {8}, g));  // cutoff beyond lattice
}

TEST_CASE("sharpness probe: p = 2 with m = 0 never amplifies") {
    Grid g(1, 64.0, 16384);
    auto pr = sharpness_probe(2.0, 0.0, 2.0, 0.6, {4, 5, 6}, g);
    for (double r : pr.ratio) CHECK(r <= 1.0 + 1e-8);
}

TEST_CASE("propagate: unitarity, group law, wave translation") {
    Grid g(1, 64.0, 2048);
    Rng rng(5);
    GridFunction F(g, Domain::Spectral);
    for (std::size_t m = 0; m < F.size(); ++m) {
        double xi = g.xi_axis(static_cast<int>(m));
        if (xi > 0.5 && xi < 20.0) F.v[m] = cplx(rng.normal(), rng.normal());
    }
    auto f0 = inverse_transform(F);
    double n0 = lp_norm(f0, 2.0);

    for (const char* name : {"schrodinger", "wave", "water", "capillary", "kleingordon"}) {
        auto preset = parse_propagator(name, 1);
        auto us = propagate(preset, f0, {0.3, 0.7, 1.0});
        for (const auto& u : us)
            CHECK(std::abs(lp_norm(u, 2.0) - n0) <= 1e-10 * n0);

        // group law: U(0.3) U(0.7) = U(1.0)
        auto step = propagate(preset, us[0], {0.7})[0];
        double err = 0;
        for (std::size_t i = 0; i < step.size(); ++i)
            err = std::max(err, std::abs(step.v[i] - us[2].v[i]));
        CHECK(err <= 1e-9 * lp_norm(us[2], INFINITY));
    }

    // one-sided wave data translates: u(x,t) = f(x+t)
    auto wave = parse_propagator("wave", 1);
    double t = 0.37;
    auto u = propagate(wave, f0, {t})[0];
    double err = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double x = g.x_node(i)[0];
        cplx oracle(0.0);
        for (std::size_t m = 0; m < F.size(); ++m) {
            if (F.v[m] == cplx(0.0)) continue;
            double xi = g.xi_axis(static_cast<int>(m));
            oracle += F.v[m] * std::polar(1.0, (x + t) * xi);
        }
        oracle /= g.L;  // dxi/(2pi) sum weight
        err = std::max(err, std::abs(u.v[i] - oracle));
    }
    CHECK(err < 1e-8 * lp_norm(f0, INFINITY));

    // harmonic oscillator ground state: phase factor e^{-it}
    Grid gh(1, 40.0, 1024);
    auto gs = sample_spatial(gh, [](A2 x) { return std::exp(-x[0] * x[0] / 2); });
    auto ho = parse_propagator("ho", 1);
    auto uh = propagate(ho, gs, {0.3})[0];
    double err_h = 0;
    for (std::size_t i = 0; i < uh.size(); ++i)
        err_h = std::max(err_h, std::abs(uh.v[i] - std::polar(1.0, -0.3) * gs.v[i]));
    CHECK(err_h < 1e-6);
    CHECK_THROWS(propagate(ho, gs, {2.0}));  // outside validity
}

TEST_CASE("dispersive report: schrodinger at p = 2 is flat") {
    Grid g(1, 64.0, 8192);
    auto preset = parse_propagator("schrodinger", 1);
    auto rep = dispersive_estimate_report(preset, 0.5, 2.0, 2.0, {0.25, 1.0}, 4, 9, g, 2, 6);
    for (double r : rep.band_ratio) {
        CHECK(r <= 4.0);
        CHECK(r >= 0.25);
    }
    CHECK(rep.R_max <= 4.0);
    CHECK(rep.R_max >= 0.25);

    CHECK_THROWS(dispersive_estimate_report(preset, 0.0, INFINITY, INFINITY, {0.5}, 2, 1, g, 2, 5));
    CHECK_THROWS(dispersive_estimate_report(preset, 0.0, 2.0, 2.0, {1.5}, 2, 1, g, 2, 5));
}

TEST_CASE("dispersive report: water wave at p = 4 stays under the critical slope") {
    Grid g(1, 64.0, 16384);
    auto preset = parse_propagator("water", 1);
    auto rep = dispersive_estimate_report(preset, 0.0, 4.0, 4.0, {0.5, 1.0}, 4, 13, g, 3, 8);
    double bound = -critical_order(0.5, 1, 4.0) + 0.15;
    CHECK(rep.band_slope <= bound);
    CHECK(rep.band_slope >= -0.2);
}

TEST_CASE("report serialization is deterministic") {
    Grid g(1, 64.0, 8192);
    auto spec = power_spec(2.0, 0.0, g);
    auto r1 = estimate_band_norms(spec, 2.0, 2, 6, 3, 42, BandFamily::Chirp);
    auto r2 = estimate_band_norms(spec, 2.0, 2, 6, 3, 42, BandFamily::Chirp);
    CHECK(band_report_csv(r1) == band_report_csv(r2));
    CHECK(to_json(r1).dump() == to_json(r2).dump());

    auto r3 = estimate_band_norms(spec, 2.0, 2, 6, 3, 43, BandFamily::Chirp);
    CHECK(band_report_csv(r1) != band_report_csv(r3));

    CHECK(fnv1a64("abc") != fnv1a64("abd"));
    CHECK(hash_hex(fnv1a64("abc")).size() == 16);
}
