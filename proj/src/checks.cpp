#include "oscillab/checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace oscillab {

double critical_order(double k, int n, double p) {
    if (!(k > 0)) throw std::invalid_argument("critical_order: k must be positive");
    if (!(p > 0)) throw std::invalid_argument("critical_order: p must be in (0, inf]");
    double invp = std::isinf(p) ? 0.0 : 1.0 / p;
    return -k * n * std::abs(invp - 0.5);
}

namespace {

using A2 = std::array<double, 2>;

double absxi(A2 xi, int n) { return (n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }

void push_angles(SampleSet& s, A2 x, double r, int n) {
    if (n == 1) {
        s.points.push_back({x, {r, 0.0}});
        s.points.push_back({x, {-r, 0.0}});
    } else {
        for (int a = 0; a < 8; ++a) {
            double th = 2 * M_PI * a / 8 + 0.1;
            s.points.push_back({x, {r * std::cos(th), r * std::sin(th)}});
        }
    }
}

std::vector<A2> x_grid(int n, double X, int per_axis) {
    std::vector<A2> out;
    if (n == 1) {
        for (int i = 0; i < per_axis; ++i)
            out.push_back({-X + 2 * X * i / (per_axis - 1), 0.0});
    } else {
        for (int i = 0; i < per_axis; ++i)
            for (int k = 0; k < per_axis; ++k)
                out.push_back({-X + 2 * X * i / (per_axis - 1),
                               -X + 2 * X * k / (per_axis - 1)});
    }
    return out;
}

// Multi-index pairs (beta_x, alpha_xi) with the given total-order window.
struct IndexPair {
    std::array<int, 2> bx, ax;
    int abs_bx, abs_ax;
};

std::vector<IndexPair> index_pairs(int n, int max_total) {
    std::vector<IndexPair> out;
    auto add = [&](std::array<int, 2> b, std::array<int, 2> a) {
        int sb = b[0] + b[1], sa = a[0] + a[1];
        if (sb + sa <= max_total) out.push_back({b, a, sb, sa});
    };
    if (n == 1) {
        for (int b = 0; b <= max_total; ++b)
            for (int a = 0; a <= max_total; ++a) add({b, 0}, {a, 0});
    } else {
        for (int b1 = 0; b1 <= max_total; ++b1)
            for (int b2 = 0; b2 + b1 <= max_total; ++b2)
                for (int a1 = 0; a1 + b1 + b2 <= max_total; ++a1)
                    for (int a2 = 0; a1 + a2 + b1 + b2 <= max_total; ++a2)
                        add({b1, b2}, {a1, a2});
    }
    return out;
}

// d^alpha_xi d^beta_x of the dot product x.xi (to subtract from phi).
double dot_derivative(std::array<int, 2> bx, std::array<int, 2> ax, A2 x, A2 xi, int n) {
    int sb = bx[0] + bx[1], sa = ax[0] + ax[1];
    if (sb == 0 && sa == 0) {
        return (n == 1) ? x[0] * xi[0] : x[0] * xi[0] + x[1] * xi[1];
    }
    if (sb == 0 && sa == 1) return (ax[0] == 1) ? x[0] : x[1];
    if (sb == 1 && sa == 0) return (bx[0] == 1) ? xi[0] : xi[1];
    if (sb == 1 && sa == 1) {
        int bxa = (bx[0] == 1) ? 0 : 1;
        int axa = (ax[0] == 1) ? 0 : 1;
        return (bxa == axa) ? 1.0 : 0.0;
    }
    return 0.0;
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SampleSet sample_highfreq(int n, int j_max, std::uint64_t seed) {
    SampleSet s;
    s.description = "x tensor grid [-4,4], xi dyadic shells 2^0..2^" +
                    std::to_string(j_max) + " + random, |xi| >= 1";
    auto xs = x_grid(n, 4.0, (n == 1) ? 9 : 5);
    for (const auto& x : xs)
        for (int j = 0; j <= j_max; ++j)
            for (double jit : {1.0, 1.31, 1.73})
                push_angles(s, x, std::ldexp(jit, j), n);
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 64; ++i) {
        A2 x{4 * u(eng), n == 2 ? 4 * u(eng) : 0.0};
        double r = std::ldexp(1.0 + std::abs(u(eng)), static_cast<int>(std::abs(u(eng)) * j_max));
        push_angles(s, x, r, n);
    }
    return s;
}

SampleSet sample_lowfreq(int n, std::uint64_t seed) {
    SampleSet s;
    s.description = "x tensor grid [-4,4], xi shells 2^1..2^-20";
    auto xs = x_grid(n, 4.0, (n == 1) ? 9 : 5);
    for (const auto& x : xs)
        for (int l = -1; l <= 20; ++l)
            for (double jit : {1.0, 1.41})
                push_angles(s, x, std::ldexp(jit, -l), n);
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 32; ++i) {
        A2 x{4 * u(eng), n == 2 ? 4 * u(eng) : 0.0};
        push_angles(s, x, std::pow(2.0, -20.0 * std::abs(u(eng))), n);
    }
    // keep only |xi| <= 2
    SampleSet out;
    out.description = s.description;
    for (auto& pt : s.points)
        if (absxi(pt.second, n) <= 2.0) out.points.push_back(pt);
    return out;
}

SampleSet sample_full(int n, int j_max, bool include_origin, std::uint64_t seed) {
    SampleSet s = sample_highfreq(n, j_max, seed);
    SampleSet lo = sample_lowfreq(n, seed + 1);
    s.points.insert(s.points.end(), lo.points.begin(), lo.points.end());
    if (include_origin)
        for (const auto& x : x_grid(n, 4.0, (n == 1) ? 9 : 5))
            s.points.push_back({x, {0.0, 0.0}});
    s.description += "; low-frequency shells" + std::string(include_origin ? "; xi = 0" : "");
    return s;
}

ConditionCheck check_snd(const PhaseFunction& phi, const SampleSet& samples,
                         double delta_claimed) {
    ConditionCheck c;
    c.condition = "SND";
    c.threshold = delta_claimed;
    double mn = INFINITY;
    for (const auto& [x, xi] : samples.points) {
        try {
            double det;
            if (phi.n == 1) {
                det = phi.derivative({1, 0}, {1, 0}, x, xi);
            } else {
                double a11 = phi.derivative({1, 0}, {1, 0}, x, xi);
                double a12 = phi.derivative({1, 0}, {0, 1}, x, xi);
                double a21 = phi.derivative({0, 1}, {1, 0}, x, xi);
                double a22 = phi.derivative({0, 1}, {0, 1}, x, xi);
                det = a11 * a22 - a12 * a21;
            }
            if (!std::isfinite(det)) throw std::domain_error("non-finite determinant");
            mn = std::min(mn, std::abs(det));
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = mn;
    c.verdict = (mn >= delta_claimed);
    return c;
}

ConditionCheck check_fk(const PhaseFunction& phi, double k, const SampleSet& samples,
                        double threshold) {
    if (threshold < 0) {
        PhaseFunction model = parse_phase("power:" + fmt_num(k), phi.n);
        double ref = check_fk(model, k, samples, INFINITY).measured;
        threshold = std::max(10.0 * ref, 5.0);
    }
    ConditionCheck c;
    c.condition = "F^" + std::to_string(k);
    c.threshold = threshold;
    auto pairs = index_pairs(phi.n, JetTable::kDegree);
    double sup = 0.0;
    for (const auto& [x, xi] : samples.points) {
        double r = absxi(xi, phi.n);
        if (r < 1.0) continue;
        try {
            for (const auto& ip : pairs) {
                double num, w;
                if (k >= 1.0) {
                    if (ip.abs_bx != 0 || ip.abs_ax < 1) continue;
                    num = std::abs(phi.derivative(ip.bx, ip.ax, x, xi) -
                                   dot_derivative(ip.bx, ip.ax, x, xi, phi.n));
                    w = std::pow(r, k - 1.0);
                } else {
                    if (ip.abs_bx + ip.abs_ax < 1) continue;
                    num = std::abs(phi.derivative(ip.bx, ip.ax, x, xi) -
                                   dot_derivative(ip.bx, ip.ax, x, xi, phi.n));
                    w = std::pow(r, k - ip.abs_ax);
                }
                sup = std::max(sup, num / w);
            }
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = sup;
    c.verdict = std::isfinite(sup) && sup <= threshold;
    return c;
}

ConditionCheck check_l2_condition(const PhaseFunction& phi, const SampleSet& samples,
                                  double threshold) {
    if (threshold < 0) threshold = 10.0;
    ConditionCheck c;
    c.condition = "L2";
    c.threshold = threshold;
    auto pairs = index_pairs(phi.n, JetTable::kDegree);
    double sup = 0.0;
    for (const auto& [x, xi] : samples.points) {
        if (absxi(xi, phi.n) < 1.0) continue;
        try {
            for (const auto& ip : pairs) {
                if (ip.abs_bx < 1 || ip.abs_ax < 1) continue;
                sup = std::max(sup, std::abs(phi.derivative(ip.bx, ip.ax, x, xi)));
            }
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = sup;
    c.verdict = std::isfinite(sup) && sup <= threshold;
    return c;
}

ConditionCheck check_lf(const PhaseFunction& phi, double mu, const SampleSet& samples,
                        double threshold) {
    if (threshold < 0) {
        PhaseFunction model = parse_phase("power:" + fmt_num(mu), phi.n);
        double ref = check_lf(model, mu, samples, INFINITY).measured;
        threshold = std::max(10.0 * ref, 5.0);
    }
    ConditionCheck c;
    c.condition = "LF(" + std::to_string(mu) + ")";
    c.threshold = threshold;
    c.note = "gauge phi(x,0) subtracted";
    auto pairs = index_pairs(phi.n, JetTable::kDegree);
    double sup = 0.0;
    const A2 xi_tiny{std::ldexp(1.0, -24), 0.0};
    for (const auto& [x, xi] : samples.points) {
        double r = absxi(xi, phi.n);
        if (!(r > 0.0) || r > 2.0) continue;
        try {
            for (const auto& ip : pairs) {
                double num = phi.derivative(ip.bx, ip.ax, x, xi) -
                             dot_derivative(ip.bx, ip.ax, x, xi, phi.n);
                if (ip.abs_ax == 0)
                    num -= phi.derivative(ip.bx, {0, 0}, x, xi_tiny);
                sup = std::max(sup, std::abs(num) / std::pow(r, mu - ip.abs_ax));
            }
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = sup;
    c.verdict = std::isfinite(sup) && sup <= threshold;
    return c;
}

ConditionCheck check_schrodinger_phase(const PhaseFunction& phi, const SampleSet& samples,
                                       double threshold) {
    if (threshold < 0) threshold = 20.0;
    ConditionCheck c;
    c.condition = "schrodinger";
    c.threshold = threshold;
    auto pairs = index_pairs(phi.n, JetTable::kDegree);
    double sup = 0.0;
    for (const auto& [x, xi] : samples.points) {
        try {
            for (const auto& ip : pairs) {
                if (ip.abs_bx + ip.abs_ax < 2) continue;
                sup = std::max(sup, std::abs(phi.derivative(ip.bx, ip.ax, x, xi)));
            }
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = sup;
    c.verdict = std::isfinite(sup) && sup <= threshold;
    return c;
}

ConditionCheck check_amplitude_class(const Amplitude& a, double m, double rho,
                                     double delta_type, const SampleSet& samples,
                                     double threshold) {
    if (threshold < 0) {
        Amplitude model = parse_amplitude("bessel:" + fmt_num(m), a.n);
        double ref = check_amplitude_class(model, m, rho, delta_type, samples, INFINITY).measured;
        threshold = std::max(10.0 * ref, 5.0);
    }
    ConditionCheck c;
    c.condition = "S^" + std::to_string(m) + "_{" + std::to_string(rho) + "," +
                  std::to_string(delta_type) + "}";
    c.threshold = threshold;
    auto pairs = index_pairs(a.n, JetTable::kDegree);
    double sup = 0.0;
    for (const auto& [x, xi] : samples.points) {
        double r2 = xi[0] * xi[0] + (a.n == 2 ? xi[1] * xi[1] : 0.0);
        double jap = std::sqrt(1 + r2);
        try {
            for (const auto& ip : pairs) {
                double num = std::abs(a.derivative(ip.bx, ip.ax, x, xi));
                double w = std::pow(jap, m - rho * ip.abs_ax + delta_type * ip.abs_bx);
                sup = std::max(sup, num / w);
            }
            c.samples_used++;
        } catch (const std::exception&) {
            c.samples_skipped++;
        }
    }
    c.measured = sup;
    c.verdict = std::isfinite(sup) && sup <= threshold;
    return c;
}

PhaseReport verify_phase(const PhaseFunction& phi, int j_max, std::uint64_t seed) {
    PhaseReport rep;
    rep.name = phi.name;
    SampleSet hi = sample_highfreq(phi.n, j_max, seed);
    SampleSet lo = sample_lowfreq(phi.n, seed + 1);
    SampleSet all = sample_full(phi.n, j_max, phi.meta.smooth_at_origin, seed + 2);
    rep.sample_description = all.description;

    if (phi.meta.snd_delta > 0)
        rep.checks.push_back(check_snd(phi, phi.meta.smooth_at_origin ? all : hi,
                                       phi.meta.snd_delta));
    if (phi.meta.fk_order > 0) rep.checks.push_back(check_fk(phi, phi.meta.fk_order, hi));
    rep.checks.push_back(check_l2_condition(phi, hi));
    if (phi.meta.lf_mu > 0) rep.checks.push_back(check_lf(phi, phi.meta.lf_mu, lo));
    if (phi.meta.schrodinger) rep.checks.push_back(check_schrodinger_phase(phi, all));
    return rep;
}

}  // namespace oscillab
