#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "oscillab/grid.hpp"
#include "oscillab/spectral.hpp"

using namespace oscillab;

namespace {

// Deterministic normal sampler (Box-Muller on mt19937_64), so frozen test
// values stay frozen across standard library versions.
struct NormalGen {
    std::mt19937_64 eng;
    explicit NormalGen(std::uint64_t seed) : eng(seed) {}
    double operator()() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double a = u(eng), b = u(eng);
        a = std::max(a, 1e-300);
        return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
    }
};

GridFunction random_band_limited(const Grid& g, double xi_cut, std::uint64_t seed) {
    NormalGen gen(seed);
    GridFunction F(g, Domain::Spectral);
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto xi = g.xi_node(i);
        double r = (g.n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
        if (r <= xi_cut) F.v[i] = cplx(gen(), gen());
    }
    return inverse_transform(F);
}

}  // namespace

TEST_CASE("grid invariants") {
    Grid g(1, 10.0, 64);
    CHECK(g.dx() == doctest::Approx(10.0 / 64));
    CHECK(g.dxi() == doctest::Approx(2 * M_PI / 10.0));
    // xi = 0 appears exactly once
    int zeros = 0;
    for (int b = 0; b < g.N; ++b)
        if (g.xi_axis(b) == 0.0) ++zeros;
    CHECK(zeros == 1);
    CHECK_THROWS(Grid(1, 10.0, 60));   // not a power of two
    CHECK_THROWS(Grid(1, 10.0, 4));    // too small
    CHECK_THROWS(Grid(3, 10.0, 64));   // unsupported dimension
}

TEST_CASE("forward transform: zero, plane wave, gaussian oracle") {
    Grid g(1, 40.0, 1024);

    // f == 0 -> fhat == 0
    GridFunction z(g, Domain::Spatial);
    auto Z = forward_transform(z);
    for (auto& c : Z.v) CHECK(std::abs(c) == 0.0);

    // plane wave at a lattice frequency -> L at that node, 0 elsewhere
    int bin = 17;
    double xi0 = g.xi_axis(bin);
    auto pw = sample_spatial(g, [&](std::array<double, 2> x) {
        return std::polar(1.0, xi0 * x[0]);
    });
    auto PW = forward_transform(pw);
    for (std::size_t i = 0; i < PW.size(); ++i) {
        double expect = (i == static_cast<std::size_t>(bin)) ? g.L : 0.0;
        CHECK(std::abs(PW.v[i] - expect) < 1e-9);
    }

    // Gaussian: hat(exp(-x^2/2)) = sqrt(2 pi) exp(-xi^2/2), closed form
    auto f = sample_spatial(g, [](std::array<double, 2> x) {
        return std::exp(-x[0] * x[0] / 2);
    });
    auto F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
        double xi = g.xi_axis(static_cast<int>(i));
        if (std::abs(xi) <= 10.0) {
            double oracle = std::sqrt(2 * M_PI) * std::exp(-xi * xi / 2);
            CHECK(std::abs(F.v[i] - oracle) < 1e-10);
        }
    }

    // non-finite input rejected
    GridFunction bad(g, Domain::Spatial);
    bad.v[3] = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
    CHECK_THROWS_AS(forward_transform(bad), std::domain_error);
}

TEST_CASE("2d gaussian transform oracle") {
    Grid g(2, 30.0, 128);
    auto f = sample_spatial(g, [](std::array<double, 2> x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2);
    });
    auto F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto xi = g.xi_node(i);
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        if (r2 <= 25.0) {
            double oracle = 2 * M_PI * std::exp(-r2 / 2);
            CHECK(std::abs(F.v[i] - oracle) < 1e-9);
        }
    }
}

TEST_CASE("inverse transform and round trips") {
    Grid g(1, 20.0, 256);

    // F == 0 -> 0
    GridFunction Z(g, Domain::Spectral);
    auto z = inverse_transform(Z);
    for (auto& c : z.v) CHECK(std::abs(c) == 0.0);

    // indicator of one node scaled by L -> plane wave
    int bin = 40;
    GridFunction I(g, Domain::Spectral);
    I.v[bin] = g.L;
    auto pw = inverse_transform(I);
    double xi0 = g.xi_axis(bin);
    for (std::size_t i = 0; i < pw.size(); ++i) {
        cplx expect = std::polar(1.0, xi0 * g.x_axis(static_cast<int>(i)));
        CHECK(std::abs(pw.v[i] - expect) < 1e-12);
    }

    // round trip on random band-limited data, several grid sizes
    for (int N : {64, 256, 1024}) {
        Grid gg(1, 16.0, N);
        auto f = random_band_limited(gg, gg.xi_max_axis() / 2, 77 + N);
        auto back = inverse_transform(forward_transform(f));
        double err = 0, scale = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            err = std::max(err, std::abs(back.v[i] - f.v[i]));
            scale = std::max(scale, std::abs(f.v[i]));
        }
        CHECK(err / scale < 1e-12);
    }
    Grid g2(2, 8.0, 32);
    auto f2 = random_band_limited(g2, g2.xi_max_axis() / 2, 5);
    auto back2 = inverse_transform(forward_transform(f2));
    double err2 = 0;
    for (std::size_t i = 0; i < f2.size(); ++i)
        err2 = std::max(err2, std::abs(back2.v[i] - f2.v[i]));
    CHECK(err2 < 1e-11);
}

TEST_CASE("lp norms") {
    Grid g(1, 10.0, 128);
    auto one = sample_spatial(g, [](std::array<double, 2>) { return 1.0; });
    CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-13));

    Grid gg(1, 40.0, 1024);
    auto f = sample_spatial(gg, [](std::array<double, 2> x) {
        return std::exp(-x[0] * x[0] / 2);
    });
    // ||exp(-x^2/2)||_2 = pi^(1/4)
    CHECK(std::abs(lp_norm(f, 2.0) - std::pow(M_PI, 0.25)) < 1e-10);

    // homogeneity
    cplx c(1.7, -0.3);
    GridFunction cf = f;
    for (auto& z : cf.v) z *= c;
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
        CHECK(lp_norm(cf, p) ==
              doctest::Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-12));
    }
    CHECK(lp_norm(cf, INFINITY) ==
          doctest::Approx(std::abs(c) * lp_norm(f, INFINITY)).epsilon(1e-12));

    CHECK_THROWS(lp_norm(f, 0.0));
    CHECK_THROWS(lp_norm(f, -2.0));
}

TEST_CASE("parseval") {
    for (int N : {256, 1024}) {
        Grid g(1, 24.0, N);
        auto f = random_band_limited(g, g.xi_max_axis() / 3, 11 + N);
        auto F = forward_transform(f);
        double lhs = lp_norm(f, 2.0);
        double rhs = 0;
        for (auto& z : F.v) rhs += std::norm(z);
        rhs = std::sqrt(rhs * g.dxi() / (2 * M_PI));
        CHECK(std::abs(lhs * lhs - rhs * rhs) / (lhs * lhs) < 1e-10);
    }
}

TEST_CASE("frequency multiplier") {
    Grid g(1, 16.0, 256);
    auto f = random_band_limited(g, 4.0, 99);

    // identity
    auto id = frequency_multiplier(f, [](std::array<double, 2>) { return cplx(1.0); });
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(id.v[i] - f.v[i]) < 1e-12 * (1 + std::abs(f.v[i])));

    // psi0-type bump leaves a low-frequency plane wave unchanged
    Grid gw(1, 4 * M_PI, 128);
    auto pw = sample_spatial(gw, [](std::array<double, 2> x) {
        return std::polar(1.0, 0.5 * x[0]);
    });
    auto kept = frequency_multiplier(pw, [](std::array<double, 2> xi) {
        return cplx(std::abs(xi[0]) <= 1.0 ? 1.0 : 0.0);
    });
    for (std::size_t i = 0; i < pw.size(); ++i)
        CHECK(std::abs(kept.v[i] - pw.v[i]) < 1e-12);

    // multiplier semigroup: <xi>^-2 twice == <xi>^-4 once
    auto jap = [](std::array<double, 2> xi) { return std::sqrt(1 + xi[0] * xi[0]); };
    auto m2 = [&](std::array<double, 2> xi) { return cplx(std::pow(jap(xi), -2.0)); };
    auto m4 = [&](std::array<double, 2> xi) { return cplx(std::pow(jap(xi), -4.0)); };
    auto twice = frequency_multiplier(frequency_multiplier(f, m2), m2);
    auto once = frequency_multiplier(f, m4);
    double scale = lp_norm(f, INFINITY);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(twice.v[i] - once.v[i]) < 1e-12 * scale);

    // non-finite symbol rejected
    CHECK_THROWS_AS(frequency_multiplier(f, [](std::array<double, 2> xi) {
        return cplx(1.0 / xi[0]);  // blows up at xi = 0
    }), std::domain_error);

    // real even symbol preserves real even functions
    auto fe = sample_spatial(g, [](std::array<double, 2> x) {
        return std::exp(-x[0] * x[0]);
    });
    auto ge = frequency_multiplier(fe, m2);
    double imax = 0;
    for (auto& z : ge.v) imax = std::max(imax, std::abs(z.imag()));
    CHECK(imax < 1e-10);
}

TEST_CASE("serialization round trip and csv") {
    Grid g(2, 6.0, 16);
    auto f = random_band_limited(g, 2.0, 3);
    save_gridfunction(f, "/tmp/oscillab_test_gf");
    auto h = load_gridfunction("/tmp/oscillab_test_gf");
    CHECK(h.grid == f.grid);
    CHECK(h.domain == f.domain);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(h.v[i] == f.v[i]);
    export_abs_csv(f, "/tmp/oscillab_test_gf.csv");
    std::FILE* fp = std::fopen("/tmp/oscillab_test_gf.csv", "r");
    REQUIRE(fp);
    char head[64];
    REQUIRE(std::fgets(head, sizeof head, fp));
    CHECK(std::string(head) == "x1,x2,abs\n");
    std::fclose(fp);
}
