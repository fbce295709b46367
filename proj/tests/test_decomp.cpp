#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oscillab/grid.hpp"
#include "oscillab/lp_basis.hpp"
#include "oscillab/spectral.hpp"

using namespace oscillab;

TEST_CASE("lp basis: pointwise values and partition of unity") {
    Grid g(1, 16.0, 1024);  // xi_max = 64 pi / ... = 201
    int J = 5;
    LPBasis basis(J, g);

    // |xi| = 0.5: psi_0 = 1, all higher bands 0
    std::array<double, 2> lowxi{0.5, 0.0};
    CHECK(LPBasis::psi_j_at(0, lowxi, 1) == 1.0);
    for (int j = 1; j <= J; ++j) CHECK(LPBasis::psi_j_at(j, lowxi, 1) == 0.0);

    // support of psi_j inside the dyadic annulus
    for (int j = 1; j <= J; ++j) {
        const auto& band = basis.psi(j);
        for (std::size_t i = 0; i < band.size(); ++i) {
            double r = std::abs(g.xi_axis(static_cast<int>(i)));
            if (band[i] != 0.0) {
                CHECK(r >= std::ldexp(1.0, j - 1));
                CHECK(r <= std::ldexp(1.0, j + 1));
            }
        }
    }

    // telescoping: sum_{j<=J} psi_j = psi0(2^-J xi); equals 1 for |xi| <= 2^J
    for (std::size_t i = 0; i < g.total(); ++i) {
        double r = std::abs(g.xi_axis(static_cast<int>(i)));
        double s = 0;
        for (int j = 0; j <= J; ++j) s += basis.psi(j)[i];
        CHECK(std::abs(s - psi0_radial(std::ldexp(r, -J))) < 1e-12);
        if (r <= std::ldexp(1.0, J)) CHECK(std::abs(s - 1.0) < 1e-12);
    }

    // scaling identity psi_j(xi) = psi_1(2^-(j-1) xi)
    for (int j = 2; j <= J; ++j) {
        for (double r : {1.5 * (1 << j), 0.8 * (1 << j), 2.9 * (1 << j)}) {
            std::array<double, 2> xi{r, 0.0};
            std::array<double, 2> scaled{std::ldexp(r, -(j - 1)), 0.0};
            CHECK(std::abs(LPBasis::psi_j_at(j, xi, 1) - LPBasis::psi_j_at(1, scaled, 1)) < 1e-12);
        }
    }

    // Psi_j = 1 on supp psi_j; psi_j psi_j' = 0 for |j-j'| >= 2
    for (int j = 0; j <= J; ++j) {
        const auto& band = basis.psi(j);
        const auto& wide = basis.Psi(j);
        for (std::size_t i = 0; i < band.size(); ++i) {
            if (band[i] != 0.0) CHECK(std::abs(wide[i] - 1.0) < 1e-12);
            for (int jp = j + 2; jp <= J; ++jp) CHECK(band[i] * basis.psi(jp)[i] == 0.0);
        }
    }

    // overlap bound: at most 2 bands alive; sum of squares in [1/2, 1] inside 2^J
    for (std::size_t i = 0; i < g.total(); ++i) {
        double r = std::abs(g.xi_axis(static_cast<int>(i)));
        int alive = 0;
        double sq = 0;
        for (int j = 0; j <= J; ++j) {
            if (basis.psi(j)[i] != 0.0) ++alive;
            sq += basis.psi(j)[i] * basis.psi(j)[i];
        }
        CHECK(alive <= 2);
        if (r <= std::ldexp(1.0, J)) {
            CHECK(sq >= 0.5 - 1e-12);
            CHECK(sq <= 1.0 + 1e-12);
        }
    }

    // j_max too large for the grid
    CHECK_THROWS(LPBasis(12, g));
}

TEST_CASE("lp pieces") {
    Grid g(1, 4 * M_PI, 512);  // dxi = 0.5, xi_max = 128
    LPBasis basis(5, g);

    // spectrum below 0.5 -> band 2 empty
    auto low = sample_spatial(g, [](std::array<double, 2> x) {
        return std::polar(1.0, 0.5 * x[0]) + 2.0;
    });
    auto p2 = lp_piece(low, 2, basis);
    CHECK(lp_norm(p2, INFINITY) < 1e-13);

    // partition reassembles band-limited f
    std::mt19937_64 eng(42);
    std::uniform_real_distribution<double> u(-1, 1);
    GridFunction F(g, Domain::Spectral);
    for (std::size_t i = 0; i < F.size(); ++i)
        if (std::abs(g.xi_axis(static_cast<int>(i))) <= 32.0) F.v[i] = cplx(u(eng), u(eng));
    auto f = inverse_transform(F);
    GridFunction sum(g, Domain::Spatial);
    for (int j = 0; j <= 5; ++j) {
        auto pj = lp_piece(f, j, basis);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.v[i] += pj.v[i];
    }
    double scale = lp_norm(f, INFINITY);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(sum.v[i] - f.v[i]) < 1e-10 * scale);

    // psi_1 psi_4 = 0
    auto nested = lp_piece(lp_piece(f, 1, basis), 4, basis);
    CHECK(lp_norm(nested, INFINITY) < 1e-14 * scale);
}

TEST_CASE("second decomposition") {
    Grid g(1, 16.0, 2048);
    SecondDecomposition dec(3, g);

    // center count comparable to 2^j
    CHECK(dec.center_count() >= (1u << 3));
    CHECK(dec.center_count() <= 6u * (1u << 3));

    // partition of unity on supp psi_3 and consistency with psi_3
    LPBasis basis(4, g);
    for (std::size_t i = 0; i < g.total(); ++i) {
        double psi3 = basis.psi(3)[i];
        if (psi3 != 0.0) {
            auto xi = g.xi_node(i);
            CHECK(std::abs(dec.chi_sum(xi) - 1.0) < 1e-12);
            double s = 0;
            for (std::size_t nu = 0; nu < dec.center_count(); ++nu) s += dec.chi(nu, xi);
            CHECK(std::abs(s * psi3 - psi3) < 1e-12);
        }
    }

    // each chi vanishes at distance >= 2 from its center
    for (std::size_t nu = 0; nu < dec.center_count(); nu += 3) {
        auto c = dec.center(nu);
        CHECK(dec.chi(nu, {c[0] + 2.001, 0.0}) == 0.0);
        CHECK(dec.chi(nu, {c[0] - 2.5, 0.0}) == 0.0);
    }

    // 2d variant: counts scale like 2^(2j) and cover supp psi_j
    Grid g2(2, 16.0, 64);
    SecondDecomposition dec2(2, g2);
    CHECK(dec2.center_count() >= 16u);
    CHECK(dec2.center_count() <= 40u * 16u);
    LPBasis basis2(2, g2);
    for (std::size_t i = 0; i < g2.total(); i += 7) {
        if (basis2.psi(2)[i] != 0.0)
            CHECK(std::abs(dec2.chi_sum(g2.xi_node(i)) - 1.0) < 1e-12);
    }

    // annulus must fit in the lattice
    CHECK_THROWS(SecondDecomposition(9, Grid(1, 16.0, 64)));
}

TEST_CASE("directional partition") {
    Grid g(1, 16.0, 512);
    double R = 4.0;
    DirectionalPartition dir(R, g);

    // positive axis far out: lambda_0 = 1, lambda_1 = 0
    CHECK(dir.lambda(0, {2 * R, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dir.lambda(1, {2 * R, 0.0}) == 0.0);

    // partition of unity outside B(0,R), values in [0,1]
    for (std::size_t i = 0; i < g.total(); ++i) {
        auto xi = g.xi_node(i);
        double s = 0;
        for (int ell = 0; ell < dir.count(); ++ell) {
            double l = dir.lambda(ell, xi);
            CHECK(l >= 0.0);
            CHECK(l <= 1.0);
            s += l;
        }
        if (std::abs(xi[0]) >= R) CHECK(std::abs(s - 1.0) < 1e-12);
    }

    // 2d: 4 directions, sum 1 outside radius R
    Grid g2(2, 16.0, 32);
    DirectionalPartition dir2(R, g2);
    CHECK(dir2.count() == 4);
    for (std::size_t i = 0; i < g2.total(); ++i) {
        auto xi = g2.xi_node(i);
        if (std::hypot(xi[0], xi[1]) >= R) {
            double s = 0;
            for (int ell = 0; ell < 4; ++ell) s += dir2.lambda(ell, xi);
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
    }

    // sampled derivative boundedness of the ramp (finite differences stay tame)
    auto l0 = dir2.sampled(0);
    CHECK(l0.size() == g2.total());

    CHECK_THROWS(DirectionalPartition(1.0, g));
}
