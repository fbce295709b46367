#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oscillab/checks.hpp"
#include "oscillab/expr.hpp"
#include "oscillab/phase.hpp"

using namespace oscillab;
using A2 = std::array<double, 2>;

TEST_CASE("jet algebra against closed forms") {
    const JetTable& tab = JetTable::get(2);
    // f(x, xi) = sin(x) * xi^2 at (0.7, 1.3)
    double x0 = 0.7, xi0 = 1.3;
    auto X = Jet<double>::variable(tab, x0, 0);
    auto XI = Jet<double>::variable(tab, xi0, 1);
    auto f = sin(X) * (XI * XI);

    CHECK(f.value() == doctest::Approx(std::sin(x0) * xi0 * xi0).epsilon(1e-14));
    CHECK(f.derivative({1, 0, 0, 0}) == doctest::Approx(std::cos(x0) * xi0 * xi0).epsilon(1e-14));
    CHECK(f.derivative({0, 1, 0, 0}) == doctest::Approx(std::sin(x0) * 2 * xi0).epsilon(1e-14));
    CHECK(f.derivative({1, 1, 0, 0}) == doctest::Approx(std::cos(x0) * 2 * xi0).epsilon(1e-14));
    CHECK(f.derivative({3, 1, 0, 0}) == doctest::Approx(-std::cos(x0) * 2 * xi0).epsilon(1e-13));
    CHECK(f.derivative({0, 2, 0, 0}) == doctest::Approx(2 * std::sin(x0)).epsilon(1e-14));

    // quotient and power: g = <xi>^-3 = (1+xi^2)^(-3/2)
    auto g = pow(XI * XI + 1.0, -1.5);
    double j = std::sqrt(1 + xi0 * xi0);
    CHECK(g.value() == doctest::Approx(std::pow(j, -3)).epsilon(1e-14));
    CHECK(g.derivative({0, 1, 0, 0}) ==
          doctest::Approx(-3 * xi0 * std::pow(j, -5)).epsilon(1e-13));

    // exp/div chain: h = exp(-1/(1+xi^2))
    auto h = exp(-1.0 * recip(XI * XI + 1.0));
    double hv = std::exp(-1.0 / (1 + xi0 * xi0));
    CHECK(h.value() == doctest::Approx(hv).epsilon(1e-14));
    double dh = hv * (2 * xi0) / std::pow(1 + xi0 * xi0, 2);
    CHECK(h.derivative({0, 1, 0, 0}) == doctest::Approx(dh).epsilon(1e-13));
}

TEST_CASE("preset derivatives agree with finite differences at O(h^2)") {
    std::vector<std::string> keys = {"linear", "power:2",     "power:0.5", "kg:0.1",
                                     "tk:0.1,0.5", "schrodinger", "ho:0.3",    "fujiwara1d:1.5"};
    for (const auto& key : keys) {
        PhaseFunction phi = parse_phase(key, 1);
        A2 x{0.9, 0.0}, xi{3.7, 0.0};
        for (auto [bx, ax] : {std::pair<std::array<int, 2>, std::array<int, 2>>{{1, 0}, {1, 0}},
                              {{2, 0}, {0, 0}},
                              {{0, 0}, {2, 0}},
                              {{1, 0}, {2, 0}}}) {
            double exact = phi.derivative(bx, ax, x, xi);
            double e1 = std::abs(fd_phase_derivative(phi, bx, ax, x, xi, 1e-2) - exact);
            double e2 = std::abs(fd_phase_derivative(phi, bx, ax, x, xi, 5e-3) - exact);
            // halving h divides the O(h^2) error by about 4
            if (e1 > 1e-9) CHECK(e2 <= e1 / 2.5);
            CHECK(e1 <= 1e-3 * (1 + std::abs(exact)));
        }
    }
    // 2d preset
    PhaseFunction p2 = parse_phase("power:1.5", 2);
    A2 x{0.4, -0.8}, xi{2.0, 1.5};
    for (auto [bx, ax] : {std::pair<std::array<int, 2>, std::array<int, 2>>{{1, 0}, {0, 1}},
                          {{0, 0}, {1, 1}},
                          {{0, 1}, {0, 2}}}) {
        double exact = p2.derivative(bx, ax, x, xi);
        double e1 = std::abs(fd_phase_derivative(p2, bx, ax, x, xi, 1e-2) - exact);
        CHECK(e1 <= 1e-3 * (1 + std::abs(exact)));
    }
}

TEST_CASE("critical order") {
    CHECK(critical_order(2, 1, 1) == doctest::Approx(-1.0));
    CHECK(critical_order(1, 3, 2) == doctest::Approx(0.0));
    CHECK(critical_order(0.5, 2, INFINITY) == doctest::Approx(-0.5));
    CHECK_THROWS(critical_order(0.0, 1, 2));
    CHECK_THROWS(critical_order(-1.0, 1, 2));
    CHECK_THROWS(critical_order(1.0, 1, 0.0));

    // monotone decreasing in k for p != 2
    double prev = 0;
    for (double k : {0.5, 1.0, 1.5, 2.0}) {
        double m = critical_order(k, 1, 1.0);
        CHECK(m < prev);
        prev = m;
    }
    // symmetric under 1/p <-> 1 - 1/p
    for (double p : {1.0, 4.0 / 3, 2.0, 4.0}) {
        double pdual = 1.0 / (1.0 - 1.0 / p);
        if (std::isinf(pdual) || pdual <= 0) pdual = INFINITY;
        CHECK(critical_order(1.5, 2, p) ==
              doctest::Approx(critical_order(1.5, 2, pdual)).epsilon(1e-14));
    }
}

TEST_CASE("snd checks") {
    SampleSet hi = sample_highfreq(1, 6);

    auto lin = parse_phase("linear", 1);
    auto c = check_snd(lin, hi, 1.0);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(1.0));

    auto pw = parse_phase("power:2", 1);
    c = check_snd(pw, hi, 1.0);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(1.0));

    auto fj = parse_phase("fujiwara1d:2", 1);
    c = check_snd(fj, hi, 0.5);
    CHECK(c.verdict);
    CHECK(c.measured >= 0.5);

    // 2d
    SampleSet hi2 = sample_highfreq(2, 4);
    auto kg2 = parse_phase("kg:0.1", 2);
    c = check_snd(kg2, hi2, kg2.meta.snd_delta);
    CHECK(c.verdict);
}

TEST_CASE("fk checks") {
    SampleSet hi = sample_highfreq(1, 6);

    auto pw2 = parse_phase("power:2", 1);
    auto c = check_fk(pw2, 2.0, hi);
    CHECK(c.verdict);
    CHECK(c.measured <= 3.0);  // |d(xi^2)|/|xi| = 2 dominates

    auto kg = parse_phase("kg:0.1", 1);
    CHECK(check_fk(kg, 1.0, hi).verdict);

    // |xi|^3 against k = 2: the ratio grows linearly in |xi|
    auto pw3 = parse_phase("power:3", 1);
    c = check_fk(pw3, 2.0, hi);
    CHECK_FALSE(c.verdict);
    CHECK(c.measured > 100.0);

    // k < 1 branch
    auto tk = parse_phase("tk:0.1,0.5", 1);
    CHECK(check_fk(tk, 0.5, hi).verdict);
}

TEST_CASE("l2 condition checks") {
    SampleSet hi = sample_highfreq(1, 6);

    auto lin = parse_phase("linear", 1);
    auto c = check_l2_condition(lin, hi);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(1.0));

    auto pw = parse_phase("power:1.5", 1);
    c = check_l2_condition(pw, hi);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(1.0));  // xi-only term has no mixed derivatives

    auto tk = parse_phase("tk:0.1,1", 1);
    CHECK(check_l2_condition(tk, hi).verdict);
}

TEST_CASE("lf checks") {
    SampleSet lo = sample_lowfreq(1);

    auto pw_half = parse_phase("power:0.5", 1);
    CHECK(check_lf(pw_half, 0.5, lo).verdict);

    auto lin = parse_phase("linear", 1);
    CHECK(check_lf(lin, 0.3, lo).verdict);
    CHECK(check_lf(lin, 1.0, lo).verdict);

    // mu = 1 claim fails for |xi|^(1/2): ratio blows up near the origin
    auto c = check_lf(pw_half, 1.0, lo);
    CHECK_FALSE(c.verdict);
    CHECK(c.measured > 100.0);

    // power:2 satisfies the eq-lf2-type claim with mu = 1
    auto pw2 = parse_phase("power:2", 1);
    CHECK(check_lf(pw2, 1.0, lo).verdict);

    // the sin-cos example checks cleanly thanks to the gauge
    auto fj = parse_phase("fujiwara1d:2", 1);
    CHECK(check_lf(fj, 1.0, lo).verdict);
    auto fj_half = parse_phase("fujiwara1d:0.5", 1);
    CHECK(check_lf(fj_half, 0.5, lo).verdict);
}

TEST_CASE("schrodinger phase checks") {
    SampleSet all = sample_full(1, 5, true);

    auto pw2 = parse_phase("power:2", 1);
    auto c = check_schrodinger_phase(pw2, all);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(2.0));

    auto sc = parse_phase("schrodinger", 1);
    CHECK(check_schrodinger_phase(sc, all).verdict);

    auto ho = parse_phase("ho:0.3", 1);
    CHECK(check_schrodinger_phase(ho, all).verdict);

    // |xi|^3 has unbounded second xi-derivative
    auto pw3 = parse_phase("power:3", 1);
    CHECK_FALSE(check_schrodinger_phase(pw3, sample_highfreq(1, 6)).verdict);
}

TEST_CASE("amplitude class checks") {
    SampleSet hi = sample_highfreq(1, 6);

    auto one = parse_amplitude("one", 1);
    auto c = check_amplitude_class(one, 0.0, 0.0, 0.0, hi);
    CHECK(c.verdict);
    CHECK(c.measured == doctest::Approx(1.0));

    auto bes = parse_amplitude("bessel:-1.5", 1);
    CHECK(check_amplitude_class(bes, -1.5, 1.0, 0.0, hi).verdict);

    // the sharpness symbol e^{i|xi|^2}(1-psi0)|xi|^m is in no S^m_{1,0}
    auto miy = parse_amplitude("miyachi:2,-0.5", 1);
    c = check_amplitude_class(miy, -0.5, 1.0, 0.0, hi);
    CHECK_FALSE(c.verdict);
    CHECK(c.measured > 1e3);

    auto sx = parse_amplitude("sxsxi:0.2", 1);
    CHECK(check_amplitude_class(sx, 0.0, 0.0, 0.0, hi).verdict);
}

TEST_CASE("preset catalog metadata confirmed by checkers") {
    for (const auto& key : {"linear", "power:0.5", "power:1", "power:1.5", "power:2",
                            "kg:0.1", "tk:0.1,0.5", "tk:0.1,1", "schrodinger", "ho:0.3",
                            "fujiwara1d:1", "fujiwara1d:2"}) {
        PhaseFunction phi = parse_phase(key, 1);
        PhaseReport rep = verify_phase(phi);
        INFO("preset ", key);
        for (const auto& c : rep.checks) {
            INFO("condition ", c.condition, " measured ", c.measured);
            CHECK(c.verdict);
        }
    }
    for (const auto& key : {"linear", "power:2", "kg:0.1"}) {
        PhaseFunction phi = parse_phase(key, 2);
        PhaseReport rep = verify_phase(phi, 4);
        for (const auto& c : rep.checks) {
            INFO("2d preset ", key, " condition ", c.condition);
            CHECK(c.verdict);
        }
    }
}

TEST_CASE("expression parsing and evaluation") {
    Expression e("x*xi + abs(xi)^2", 1);
    CHECK(e.eval({2.0, 0}, {3.0, 0}) == doctest::Approx(6 + 9).epsilon(1e-14));

    Expression trig("sin(x)*cos(xi) + jap(xi)", 1);
    CHECK(trig.eval({0.5, 0}, {1.5, 0}) ==
          doctest::Approx(std::sin(0.5) * std::cos(1.5) + std::sqrt(1 + 2.25)).epsilon(1e-14));

    // jet of an expression matches the analytic derivative
    auto j = trig.jet({0.5, 0.0}, {1.5, 0.0});
    CHECK(j.derivative({1, 0, 0, 0}) ==
          doctest::Approx(std::cos(0.5) * std::cos(1.5)).epsilon(1e-12));
    CHECK(j.derivative({0, 1, 0, 0}) ==
          doctest::Approx(-std::sin(0.5) * std::sin(1.5) + 1.5 / std::sqrt(3.25)).epsilon(1e-12));

    Expression e2("x1*xi1 + x2*xi2 + abs(xi)^1.5", 2);
    CHECK(e2.eval({1, 2}, {3, 4}) == doctest::Approx(3 + 8 + std::pow(5.0, 1.5)).epsilon(1e-13));

    // phase/amplitude from expressions
    PhaseFunction pe = parse_phase("expr:x*xi + 0.5*abs(xi)^2", 1);
    CHECK(pe.eval({1, 0}, {2, 0}) == doctest::Approx(2 + 2).epsilon(1e-14));
    Amplitude ae = parse_amplitude("expr:jap(xi)^-2", 1);
    CHECK(ae.eval({0, 0}, {1, 0}).real() == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS(Expression("x + y", 1));          // unknown symbol
    CHECK_THROWS(Expression("x2 + xi", 1));        // 2d variable in 1d
    CHECK_THROWS(Expression("sin(x", 1));          // unbalanced
    CHECK_THROWS(Expression("x ** 2", 1));         // bad operator
    CHECK_THROWS(parse_phase("nope:1", 1));
    CHECK_THROWS(parse_amplitude("nope", 1));
}

TEST_CASE("phase gradient access") {
    auto pw2 = parse_phase("power:2", 1);
    auto g = pw2.grad_x({0.3, 0}, {5.0, 0});
    CHECK(g[0] == doctest::Approx(5.0).epsilon(1e-14));  // d/dx (x xi + xi^2) = xi

    auto kg2 = parse_phase("kg:0.1", 2);
    auto g2 = kg2.grad_x({0.2, 0.4}, {1.0, 2.0});
    double jap = std::sqrt(1 + 5.0);
    CHECK(g2[0] == doctest::Approx(1.0 + 0.1 * std::cos(0.2) * jap).epsilon(1e-13));
    CHECK(g2[1] == doctest::Approx(2.0 + 0.1 * std::cos(0.4) * jap).epsilon(1e-13));
}
