#include "oscillab/phase.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oscillab/lp_basis.hpp"

namespace oscillab {

namespace {

using JD = Jet<double>;
using JC = Jet<std::complex<double>>;
using A2 = std::array<double, 2>;

struct Vars {
    const JetTable* tab;
    int n;
    JD X[2], XI[2];
};

Vars make_vars(A2 x, A2 xi, int n) {
    const JetTable& tab = JetTable::get(2 * n);
    Vars v{&tab, n, {}, {}};
    for (int a = 0; a < n; ++a) {
        v.X[a] = JD::variable(tab, x[a], a);
        v.XI[a] = JD::variable(tab, xi[a], n + a);
    }
    return v;
}

JD dot_x_xi(const Vars& v) {
    JD acc = v.X[0] * v.XI[0];
    if (v.n == 2) acc += v.X[1] * v.XI[1];
    return acc;
}

JD xi_r2(const Vars& v) {
    JD acc = v.XI[0] * v.XI[0];
    if (v.n == 2) acc += v.XI[1] * v.XI[1];
    return acc;
}

JD x_r2(const Vars& v) {
    JD acc = v.X[0] * v.X[0];
    if (v.n == 2) acc += v.X[1] * v.X[1];
    return acc;
}

double dot_d(A2 x, A2 xi, int n) {
    return (n == 1) ? x[0] * xi[0] : x[0] * xi[0] + x[1] * xi[1];
}

double absxi_d(A2 xi, int n) { return (n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }

double jap_d(A2 xi, int n) {
    double r2 = xi[0] * xi[0] + (n == 2 ? xi[1] * xi[1] : 0.0);
    return std::sqrt(1 + r2);
}

// |xi|^k as (xi.xi)^(k/2): continuous extension 0 at the origin.
double pow_abs_d(A2 xi, int n, double k) {
    double r = absxi_d(xi, n);
    return (r == 0.0) ? 0.0 : std::pow(r, k);
}

JD pow_abs_j(const Vars& v, double k) { return pow(xi_r2(v), k / 2); }

double sinprof_d(A2 x, int n) { return (n == 1) ? std::sin(x[0]) : std::sin(x[0]) + std::sin(x[1]); }

JD sinprof_j(const Vars& v) {
    JD acc = sin(v.X[0]);
    if (v.n == 2) acc += sin(v.X[1]);
    return acc;
}

std::vector<double> split_args(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

double PhaseFunction::derivative(std::array<int, 2> beta_x, std::array<int, 2> alpha_xi,
                                 A2 x, A2 xi) const {
    JD j = jet4(x, xi);
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};
    for (int a = 0; a < n; ++a) {
        e[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(beta_x[static_cast<std::size_t>(a)]);
        e[static_cast<std::size_t>(n + a)] =
            static_cast<std::uint8_t>(alpha_xi[static_cast<std::size_t>(a)]);
    }
    return j.derivative(e);
}

std::array<double, 2> PhaseFunction::grad_x(A2 x, A2 xi) const {
    JD j = jet4(x, xi);
    std::array<double, 2> g{0.0, 0.0};
    for (int a = 0; a < n; ++a) {
        std::array<std::uint8_t, 4> e{0, 0, 0, 0};
        e[static_cast<std::size_t>(a)] = 1;
        g[static_cast<std::size_t>(a)] = j.derivative(e);
    }
    return g;
}

std::complex<double> Amplitude::derivative(std::array<int, 2> beta_x, std::array<int, 2> alpha_xi,
                                           A2 x, A2 xi) const {
    JC j = jet4(x, xi);
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};
    for (int a = 0; a < n; ++a) {
        e[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(beta_x[static_cast<std::size_t>(a)]);
        e[static_cast<std::size_t>(n + a)] =
            static_cast<std::uint8_t>(alpha_xi[static_cast<std::size_t>(a)]);
    }
    return j.derivative(e);
}

PhaseFunction parse_phase(const std::string& key, int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("parse_phase: dimension must be 1 or 2");
    PhaseFunction p;
    p.n = n;
    p.name = key;

    auto colon = key.find(':');
    std::string head = key.substr(0, colon);
    std::string rest = (colon == std::string::npos) ? "" : key.substr(colon + 1);

    if (head == "linear") {
        p.meta = {1.0, 1.0, 1.0, true, true};
        p.eval = [n](A2 x, A2 xi) { return dot_d(x, xi, n); };
        p.jet4 = [n](A2 x, A2 xi) { auto v = make_vars(x, xi, n); return dot_x_xi(v); };
        p.h_xi = [](A2) { return 0.0; };
        return p;
    }
    if (head == "power") {
        double k = std::stod(rest);
        if (!(k > 0)) throw std::invalid_argument("power phase: k must be positive");
        bool even = (k == 2.0 || k == 4.0);
        p.meta = {k, std::min(1.0, k), 1.0, even, k == 2.0};
        p.eval = [n, k](A2 x, A2 xi) { return dot_d(x, xi, n) + pow_abs_d(xi, n, k); };
        p.jet4 = [n, k](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            return dot_x_xi(v) + pow_abs_j(v, k);
        };
        p.h_xi = [n, k](A2 xi) { return pow_abs_d(xi, n, k); };
        return p;
    }
    if (head == "kg") {
        double eps = std::stod(rest);
        p.meta = {1.0, 0.0, 1.0 - 1.5 * eps, true, false};
        p.eval = [n, eps](A2 x, A2 xi) {
            return dot_d(x, xi, n) + eps * sinprof_d(x, n) * jap_d(xi, n);
        };
        p.jet4 = [n, eps](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            JD jap = sqrt(xi_r2(v) + 1.0);
            return dot_x_xi(v) + eps * (sinprof_j(v) * jap);
        };
        return p;
    }
    if (head == "tk") {
        auto args = split_args(rest);
        if (args.size() != 2) throw std::invalid_argument("tk phase: expected tk:eps,k");
        double eps = args[0], k = args[1];
        if (!(k > 0) || k > 1.0) throw std::invalid_argument("tk phase: k must be in (0,1]");
        p.meta = {k, k, 1.0 - 1.5 * eps, false, false};
        p.eval = [n, eps, k](A2 x, A2 xi) {
            return dot_d(x, xi, n) + eps * sinprof_d(x, n) * pow_abs_d(xi, n, k);
        };
        p.jet4 = [n, eps, k](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            return dot_x_xi(v) + eps * (sinprof_j(v) * pow_abs_j(v, k));
        };
        return p;
    }
    if (head == "schrodinger") {
        if (n != 1) throw std::invalid_argument("schrodinger preset phase is 1d");
        p.meta = {0.0, 0.0, 1.0, true, true};
        p.eval = [](A2 x, A2 xi) {
            return std::sin(x[0]) * std::sin(xi[0]) + xi[0] * xi[0] + (2 * xi[0] + 1) * x[0];
        };
        p.jet4 = [](A2 x, A2 xi) {
            auto v = make_vars(x, xi, 1);
            return sin(v.X[0]) * sin(v.XI[0]) + v.XI[0] * v.XI[0] +
                   (2.0 * v.XI[0] + 1.0) * v.X[0];
        };
        return p;
    }
    if (head == "ho") {
        if (n != 1) throw std::invalid_argument("ho preset phase is 1d");
        double t = std::stod(rest);
        if (!(std::abs(2 * t) <= M_PI / 2 - 0.2))
            throw std::invalid_argument("ho phase: need |2t| <= pi/2 - 0.2");
        double sec = 1.0 / std::cos(2 * t), tan = std::tan(2 * t);
        p.meta = {0.0, 0.0, 1.0, true, true};
        p.eval = [sec, tan](A2 x, A2 xi) {
            return x[0] * xi[0] * sec - 0.5 * tan * (x[0] * x[0] + xi[0] * xi[0]);
        };
        p.jet4 = [sec, tan](A2 x, A2 xi) {
            auto v = make_vars(x, xi, 1);
            return sec * (v.X[0] * v.XI[0]) - (0.5 * tan) * (x_r2(v) + xi_r2(v));
        };
        return p;
    }
    if (head == "fujiwara1d") {
        if (n != 1) throw std::invalid_argument("fujiwara1d preset phase is 1d");
        double k = std::stod(rest);
        if (!(k > 0)) throw std::invalid_argument("fujiwara1d phase: k must be positive");
        p.meta = {k >= 1.0 ? k : 0.0, std::min(1.0, k), 0.5, k == 2.0, k == 2.0};
        p.eval = [k](A2 x, A2 xi) {
            return x[0] * xi[0] - 0.5 * std::sin(x[0]) * std::cos(xi[0]) +
                   pow_abs_d(xi, 1, k);
        };
        p.jet4 = [k](A2 x, A2 xi) {
            auto v = make_vars(x, xi, 1);
            return v.X[0] * v.XI[0] - 0.5 * (sin(v.X[0]) * cos(v.XI[0])) + pow_abs_j(v, k);
        };
        return p;
    }
    if (head == "expr") {
        Expression ex(rest, n);
        p.meta = {0.0, 0.0, 0.0, true, false};
        p.eval = [ex](A2 x, A2 xi) { return ex.eval(x, xi); };
        p.jet4 = [ex](A2 x, A2 xi) { return ex.jet(x, xi); };
        return p;
    }
    throw std::invalid_argument("unknown phase preset: " + key);
}

Amplitude parse_amplitude(const std::string& key, int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("parse_amplitude: dimension must be 1 or 2");
    Amplitude a;
    a.n = n;
    a.name = key;

    auto colon = key.find(':');
    std::string head = key.substr(0, colon);
    std::string rest = (colon == std::string::npos) ? "" : key.substr(colon + 1);

    if (head == "one") {
        a.meta = {0.0, 1.0, 0.0, true, INFINITY};
        a.eval = [](A2, A2) { return std::complex<double>(1.0); };
        a.jet4 = [n](A2, A2) {
            return JC::constant(JetTable::get(2 * n), std::complex<double>(1.0));
        };
        return a;
    }
    if (head == "const") {
        double cst = std::stod(rest);
        a.meta = {0.0, 1.0, 0.0, true, INFINITY};
        a.eval = [cst](A2, A2) { return std::complex<double>(cst); };
        a.jet4 = [n, cst](A2, A2) {
            return JC::constant(JetTable::get(2 * n), std::complex<double>(cst));
        };
        return a;
    }
    if (head == "bessel") {
        double m = std::stod(rest);
        a.meta = {m, 1.0, 0.0, true, INFINITY};
        a.eval = [n, m](A2, A2 xi) { return std::complex<double>(std::pow(jap_d(xi, n), m)); };
        a.jet4 = [n, m](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            return to_complex(pow(xi_r2(v) + 1.0, m / 2));
        };
        return a;
    }
    if (head == "gauss_x") {
        a.meta = {0.0, 1.0, 0.0, false, 10.0};
        a.eval = [n](A2 x, A2) {
            double r2 = x[0] * x[0] + (n == 2 ? x[1] * x[1] : 0.0);
            return std::complex<double>(std::exp(-r2 / 2));
        };
        a.jet4 = [n](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            return to_complex(exp(-0.5 * x_r2(v)));
        };
        return a;
    }
    if (head == "cutoff_x") {
        double X = std::stod(rest);
        if (!(X > 0)) throw std::invalid_argument("cutoff_x amplitude: radius must be positive");
        a.meta = {0.0, 1.0, 0.0, false, X};
        a.eval = [n, X](A2 x, A2) {
            double r = (n == 1) ? std::abs(x[0]) : std::hypot(x[0], x[1]);
            return std::complex<double>(psi0_radial(2 * r / X));
        };
        // The profile is piecewise; jets use its smooth closed form per region.
        a.jet4 = [n, X](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            double r = (n == 1) ? std::abs(x[0]) : std::hypot(x[0], x[1]);
            double s = 2 * r / X;
            const JetTable& tab = *v.tab;
            if (s <= 1.0 + 1e-12 || s >= 2.0 - 1e-12) {
                double val = (s <= 1.5) ? 1.0 : 0.0;
                return JC::constant(tab, std::complex<double>(val));
            }
            JD rj = sqrt(x_r2(v));
            JD sj = (2.0 / X) * rj;
            JD ha = exp(-1.0 / (2.0 - sj));   // bump_h(2-s)
            JD hb = exp(-1.0 / (sj - 1.0));   // bump_h(s-1)
            return to_complex(ha / (ha + hb));
        };
        return a;
    }
    if (head == "sxsxi") {
        double eps = std::stod(rest);
        a.meta = {0.0, 0.0, 0.0, false, INFINITY};
        a.eval = [n, eps](A2 x, A2 xi) {
            double v = std::sin(x[0]) * std::sin(xi[0]);
            if (n == 2) v += std::sin(x[1]) * std::sin(xi[1]);
            return std::complex<double>(1.0 + eps * v);
        };
        a.jet4 = [n, eps](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            JD acc = sin(v.X[0]) * sin(v.XI[0]);
            if (n == 2) acc += sin(v.X[1]) * sin(v.XI[1]);
            return to_complex(1.0 + eps * acc);
        };
        return a;
    }
    if (head == "miyachi") {
        auto args = split_args(rest);
        if (args.size() != 2) throw std::invalid_argument("miyachi amplitude: expected miyachi:k,m");
        double k = args[0], m = args[1];
        a.meta = {m, 1.0, 0.0, true, INFINITY};
        a.eval = [n, k, m](A2, A2 xi) {
            double r = absxi_d(xi, n);
            double cut = 1.0 - psi0_radial(r);
            if (cut == 0.0) return std::complex<double>(0.0);
            return std::polar(1.0, std::pow(r, k)) * cut * std::pow(r, m);
        };
        a.jet4 = [n, k, m](A2 x, A2 xi) {
            auto v = make_vars(x, xi, n);
            double r = absxi_d(xi, n);
            const JetTable& tab = *v.tab;
            if (r <= 1.0 + 1e-12) return JC::constant(tab, std::complex<double>(0.0));
            JD phasewave = pow_abs_j(v, k);
            JD amp = pow_abs_j(v, m);
            JC osc = exp(i_times(phasewave));
            JC out = osc * to_complex(amp);
            if (r < 2.0 - 1e-12) {
                JD rj = sqrt(xi_r2(v));
                JD ha = exp(-1.0 / (2.0 - rj));
                JD hb = exp(-1.0 / (rj - 1.0));
                out = out * to_complex(1.0 - ha / (ha + hb));
            }
            return out;
        };
        return a;
    }
    if (head == "expr") {
        Expression ex(rest, n);
        a.meta = {0.0, 0.0, 0.0, false, INFINITY};
        a.eval = [ex](A2 x, A2 xi) { return std::complex<double>(ex.eval(x, xi)); };
        a.jet4 = [ex](A2 x, A2 xi) { return to_complex(ex.jet(x, xi)); };
        return a;
    }
    throw std::invalid_argument("unknown amplitude preset: " + key);
}

Amplitude amplitude_with_xi_cutoff(const Amplitude& a,
                                   std::function<double(A2)> w_eval,
                                   std::function<Jet<double>(A2)> w_jet,
                                   const std::string& tag) {
    Amplitude out = a;
    out.name = a.name + "*" + tag;
    auto base_eval = a.eval;
    auto base_jet = a.jet4;
    out.eval = [base_eval, w_eval](A2 x, A2 xi) { return base_eval(x, xi) * w_eval(xi); };
    out.jet4 = [base_jet, w_jet](A2 x, A2 xi) {
        return base_jet(x, xi) * to_complex(w_jet(xi));
    };
    return out;
}

namespace {

double fd_recurse(const PhaseFunction& phi, std::array<int, 2> bx, std::array<int, 2> ax,
                  A2 x, A2 xi, double h) {
    for (int a = 0; a < phi.n; ++a) {
        if (bx[static_cast<std::size_t>(a)] > 0) {
            auto b2 = bx;
            b2[static_cast<std::size_t>(a)]--;
            A2 xp = x, xm = x;
            xp[static_cast<std::size_t>(a)] += h;
            xm[static_cast<std::size_t>(a)] -= h;
            return (fd_recurse(phi, b2, ax, xp, xi, h) - fd_recurse(phi, b2, ax, xm, xi, h)) /
                   (2 * h);
        }
        if (ax[static_cast<std::size_t>(a)] > 0) {
            auto a2 = ax;
            a2[static_cast<std::size_t>(a)]--;
            A2 xip = xi, xim = xi;
            xip[static_cast<std::size_t>(a)] += h;
            xim[static_cast<std::size_t>(a)] -= h;
            return (fd_recurse(phi, bx, a2, x, xip, h) - fd_recurse(phi, bx, a2, x, xim, h)) /
                   (2 * h);
        }
    }
    return phi.eval(x, xi);
}

}  // namespace

double fd_phase_derivative(const PhaseFunction& phi, std::array<int, 2> beta_x,
                           std::array<int, 2> alpha_xi, A2 x, A2 xi, double h) {
    return fd_recurse(phi, beta_x, alpha_xi, x, xi, h);
}

}  // namespace oscillab
