#include "oscillab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oscillab/spectral.hpp"

namespace oscillab {

void SpaceSpec::validate() const {
    if (!(p > 0)) throw std::invalid_argument("SpaceSpec: p must be in (0, inf]");
    if (!(q > 0)) throw std::invalid_argument("SpaceSpec: q must be in (0, inf]");
    if (family == SpaceFamily::TriebelLizorkin && std::isinf(p) && q != 2.0)
        throw std::invalid_argument("SpaceSpec: Triebel-Lizorkin requires p < inf unless (p,q) = (inf,2)");
}

std::string SpaceSpec::str() const {
    auto num = [](double v) {
        if (std::isinf(v)) return std::string("inf");
        std::ostringstream os;
        os << v;
        return os.str();
    };
    switch (family) {
        case SpaceFamily::Lp: return "Lp:p=" + num(p);
        case SpaceFamily::Besov: return "B:s=" + num(s) + ",p=" + num(p) + ",q=" + num(q);
        case SpaceFamily::TriebelLizorkin:
            return "F:s=" + num(s) + ",p=" + num(p) + ",q=" + num(q);
        case SpaceFamily::SobolevH: return "H:s=" + num(s) + ",p=" + num(p);
        case SpaceFamily::LocalHardy: return "hp:p=" + num(p);
        case SpaceFamily::LocalBMO: return "bmo";
    }
    return "?";
}

SpaceSpec parse_space_spec(const std::string& text) {
    SpaceSpec spec;
    auto colon = text.find(':');
    std::string fam = text.substr(0, colon);
    if (fam == "Lp") spec.family = SpaceFamily::Lp;
    else if (fam == "B") spec.family = SpaceFamily::Besov;
    else if (fam == "F") spec.family = SpaceFamily::TriebelLizorkin;
    else if (fam == "H") spec.family = SpaceFamily::SobolevH;
    else if (fam == "hp") spec.family = SpaceFamily::LocalHardy;
    else if (fam == "bmo") spec.family = SpaceFamily::LocalBMO;
    else throw std::invalid_argument("unknown space family: " + fam);

    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::istringstream is(rest);
        std::string kv;
        while (std::getline(is, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad space parameter: " + kv);
            std::string key = kv.substr(0, eq);
            std::string val = kv.substr(eq + 1);
            double num = (val == "inf") ? INFINITY : std::stod(val);
            if (key == "s") spec.s = num;
            else if (key == "p") spec.p = num;
            else if (key == "q") spec.q = num;
            else throw std::invalid_argument("unknown space parameter: " + key);
        }
    }
    spec.validate();
    return spec;
}

namespace {

// Fraction of spectral l2 mass beyond the ball the basis covers.
double coverage_defect(const GridFunction& f, const LPBasis& basis) {
    GridFunction F = forward_transform(f);
    const Grid& g = f.grid;
    double covered = std::ldexp(1.0, basis.j_max());
    double total = 0, outside = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto xi = g.xi_node(i);
        double r = (g.n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
        double m = std::norm(F.v[i]);
        total += m;
        if (r > covered) outside += m;
    }
    return (total > 0) ? outside / total : 0.0;
}

void check_coverage(const GridFunction& f, const LPBasis& basis, const char* who) {
    if (coverage_defect(f, basis) > 1e-6)
        throw std::invalid_argument(std::string(who) +
                                    ": basis does not cover the input's frequency content");
}

}  // namespace

double besov_norm(const GridFunction& f, double s, double p, double q, const LPBasis& basis) {
    if (!(p > 0) || !(q > 0)) throw std::invalid_argument("besov_norm: p, q must be positive");
    check_coverage(f, basis, "besov_norm");
    double acc = 0.0, mx = 0.0;
    for (int j = 0; j <= basis.j_max(); ++j) {
        double nj = lp_norm(lp_piece(f, j, basis), p);
        double term = std::pow(2.0, j * s) * nj;
        if (std::isinf(q)) mx = std::max(mx, term);
        else acc += std::pow(term, q);
    }
    return std::isinf(q) ? mx : std::pow(acc, 1.0 / q);
}

double triebel_norm(const GridFunction& f, double s, double p, double q, const LPBasis& basis) {
    if (!(p > 0) || !(q > 0)) throw std::invalid_argument("triebel_norm: p, q must be positive");
    if (std::isinf(p)) {
        if (q != 2.0)
            throw std::invalid_argument("triebel_norm: p = inf only supported with q = 2");
        // F^s_{inf,2} via the bmo identification of the lifted function.
        GridFunction lifted = frequency_multiplier(f, [&](std::array<double, 2> xi) {
            double r2 = xi[0] * xi[0] + xi[1] * xi[1];
            return cplx(std::pow(1.0 + r2, s / 2));
        });
        return local_bmo_norm(lifted);
    }
    check_coverage(f, basis, "triebel_norm");

    const std::size_t T = f.size();
    std::vector<double> inner(T, 0.0);  // sum_j (2^{js} |psi_j f|)^q, or sup for q = inf
    for (int j = 0; j <= basis.j_max(); ++j) {
        GridFunction pj = lp_piece(f, j, basis);
        double w = std::pow(2.0, j * s);
        for (std::size_t i = 0; i < T; ++i) {
            double term = w * std::abs(pj.v[i]);
            if (std::isinf(q)) inner[i] = std::max(inner[i], term);
            else inner[i] += std::pow(term, q);
        }
    }
    double acc = 0.0, mx = 0.0;
    const double vol = std::pow(f.grid.dx(), f.grid.n);
    for (std::size_t i = 0; i < T; ++i) {
        double val = std::isinf(q) ? inner[i] : std::pow(inner[i], 1.0 / q);
        if (std::isinf(p)) mx = std::max(mx, val);
        else acc += std::pow(val, p) * vol;
    }
    return std::isinf(p) ? mx : std::pow(acc, 1.0 / p);
}

double sobolev_norm(const GridFunction& f, double s, double p) {
    GridFunction lifted = frequency_multiplier(f, [&](std::array<double, 2> xi) {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        return cplx(std::pow(1.0 + r2, s / 2));
    });
    return lp_norm(lifted, p);
}

double local_hardy_quasinorm(const GridFunction& f, double p, int l_max) {
    if (!(p > 0) || p > 1.0)
        throw std::invalid_argument(
            "local_hardy_quasinorm: p must be in (0,1]; for p > 1 the space is L^p");
    const Grid& g = f.grid;
    if (l_max < 0) l_max = static_cast<int>(std::ceil(std::log2(g.xi_max_axis()))) + 1;

    std::vector<double> maximal(f.size(), 0.0);
    for (int l = 0; l <= l_max; ++l) {
        double t = std::ldexp(1.0, -l);
        GridFunction ml = frequency_multiplier(f, [&](std::array<double, 2> xi) {
            return cplx(psi0_of({t * xi[0], t * xi[1]}, g.n));
        });
        for (std::size_t i = 0; i < maximal.size(); ++i)
            maximal[i] = std::max(maximal[i], std::abs(ml.v[i]));
    }
    double acc = 0.0;
    for (double m : maximal) acc += std::pow(m, p);
    return std::pow(acc * std::pow(g.dx(), g.n), 1.0 / p);
}

double local_bmo_norm(const GridFunction& f) {
    const Grid& g = f.grid;
    const std::size_t T = f.size();

    double osc_max = 0.0;
    // Dyadic sides 1, 1/2, ... down to a few grid cells.
    for (double side = 1.0; side >= 2.0 * g.dx(); side /= 2) {
        int ss = std::max(1, static_cast<int>(std::llround(side / g.dx())));
        if (g.n == 1) {
            for (int start = 0; start < g.N; start += ss) {
                int len = std::min(ss, g.N - start);
                cplx mean(0.0);
                for (int i = 0; i < len; ++i) mean += f.v[start + i];
                mean /= static_cast<double>(len);
                double osc = 0.0;
                for (int i = 0; i < len; ++i) osc += std::abs(f.v[start + i] - mean);
                osc_max = std::max(osc_max, osc / len);
            }
        } else {
            for (int s1 = 0; s1 < g.N; s1 += ss)
                for (int s2 = 0; s2 < g.N; s2 += ss) {
                    int l1 = std::min(ss, g.N - s1), l2 = std::min(ss, g.N - s2);
                    cplx mean(0.0);
                    for (int i = 0; i < l1; ++i)
                        for (int k = 0; k < l2; ++k)
                            mean += f.v[(s1 + i) * static_cast<std::size_t>(g.N) + s2 + k];
                    mean /= static_cast<double>(l1 * l2);
                    double osc = 0.0;
                    for (int i = 0; i < l1; ++i)
                        for (int k = 0; k < l2; ++k)
                            osc += std::abs(f.v[(s1 + i) * static_cast<std::size_t>(g.N) + s2 + k] - mean);
                    osc_max = std::max(osc_max, osc / (l1 * l2));
                }
        }
    }

    GridFunction low = frequency_multiplier(f, [&](std::array<double, 2> xi) {
        return cplx(psi0_of(xi, g.n));
    });
    double low_sup = 0.0;
    for (std::size_t i = 0; i < T; ++i) low_sup = std::max(low_sup, std::abs(low.v[i]));
    return osc_max + low_sup;
}

double space_norm(const GridFunction& f, const SpaceSpec& spec, const LPBasis& basis) {
    spec.validate();
    switch (spec.family) {
        case SpaceFamily::Lp: return lp_norm(f, spec.p);
        case SpaceFamily::Besov: return besov_norm(f, spec.s, spec.p, spec.q, basis);
        case SpaceFamily::TriebelLizorkin:
            return triebel_norm(f, spec.s, spec.p, spec.q, basis);
        case SpaceFamily::SobolevH: return sobolev_norm(f, spec.s, spec.p);
        case SpaceFamily::LocalHardy:
            return (spec.p <= 1.0) ? local_hardy_quasinorm(f, spec.p) : lp_norm(f, spec.p);
        case SpaceFamily::LocalBMO: return local_bmo_norm(f);
    }
    throw std::logic_error("space_norm: unreachable");
}

double ball_volume(int n, double r) { return (n == 1) ? 2.0 * r : M_PI * r * r; }

namespace {

// Multi-indices of total degree <= d in n variables.
std::vector<std::array<int, 2>> monomials_upto(int n, int d) {
    std::vector<std::array<int, 2>> out;
    if (n == 1) {
        for (int a = 0; a <= d; ++a) out.push_back({a, 0});
    } else {
        for (int a = 0; a <= d; ++a)
            for (int b = 0; a + b <= d; ++b) out.push_back({a, b});
    }
    return out;
}

}  // namespace

Atom make_atom(const Grid& grid, std::array<double, 2> x0, double r, double p,
               std::uint64_t seed) {
    if (!(r > 0)) throw std::invalid_argument("make_atom: r must be positive");
    if (!(p > 0) || p > 1.0) throw std::invalid_argument("make_atom: p must be in (0,1]");
    if (r < 6 * grid.dx())
        throw std::invalid_argument("make_atom: grid too coarse to resolve the atom radius");
    for (int a = 0; a < grid.n; ++a)
        if (std::abs(x0[a]) + r > grid.L / 2)
            throw std::invalid_argument("make_atom: ball leaves the periodic box");

    const int n = grid.n;
    const int deg_moment = (r <= 1.0)
        ? static_cast<int>(std::floor(n * (1.0 / p - 1.0)))
        : -1;  // no moment conditions for r > 1
    const int deg_poly = std::max(deg_moment, 0) + 2;

    auto mono = monomials_upto(n, deg_poly);
    const std::size_t K = mono.size();

    // Smooth bump: 1 inside r/2, 0 outside r.
    auto bump = [&](std::array<double, 2> x) {
        double d = (n == 1) ? std::abs(x[0] - x0[0]) : std::hypot(x[0] - x0[0], x[1] - x0[1]);
        return psi0_radial(2.0 * d / r);
    };

    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<double> c(K);
        for (auto& v : c) v = u(eng);

        if (deg_moment >= 0) {
            // Rows of the moment matrix over scaled coordinates ((x-x0)/r).
            auto momo = monomials_upto(n, deg_moment);
            std::vector<std::vector<double>> rows;
            for (auto& al : momo) {
                std::vector<double> row(K, 0.0);
                for (std::size_t i = 0; i < grid.total(); ++i) {
                    auto x = grid.x_node(i);
                    double b = bump(x);
                    if (b == 0.0) continue;
                    double s1 = (x[0] - x0[0]) / r;
                    double s2 = (n == 2) ? (x[1] - x0[1]) / r : 0.0;
                    double am = std::pow(s1, al[0]) * ((n == 2) ? std::pow(s2, al[1]) : 1.0);
                    for (std::size_t k = 0; k < K; ++k) {
                        double mk = std::pow(s1, mono[k][0]) *
                                    ((n == 2) ? std::pow(s2, mono[k][1]) : 1.0);
                        row[k] += am * b * mk;
                    }
                }
                rows.push_back(std::move(row));
            }
            // Orthonormalize the rows, then project the coefficients onto the
            // nullspace so every discrete moment vanishes.
            std::vector<std::vector<double>> ortho;
            for (auto& row : rows) {
                std::vector<double> w = row;
                for (auto& o : ortho) {
                    double d = 0;
                    for (std::size_t k = 0; k < K; ++k) d += w[k] * o[k];
                    for (std::size_t k = 0; k < K; ++k) w[k] -= d * o[k];
                }
                double nn = 0;
                for (double v : w) nn += v * v;
                if (nn > 1e-24) {
                    nn = std::sqrt(nn);
                    for (auto& v : w) v /= nn;
                    ortho.push_back(std::move(w));
                }
            }
            for (auto& o : ortho) {
                double d = 0;
                for (std::size_t k = 0; k < K; ++k) d += c[k] * o[k];
                for (std::size_t k = 0; k < K; ++k) c[k] -= d * o[k];
            }
        }

        GridFunction a(grid, Domain::Spatial);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.total(); ++i) {
            auto x = grid.x_node(i);
            double b = bump(x);
            if (b == 0.0) continue;
            double s1 = (x[0] - x0[0]) / r;
            double s2 = (n == 2) ? (x[1] - x0[1]) / r : 0.0;
            double pv = 0.0;
            for (std::size_t k = 0; k < K; ++k)
                pv += c[k] * std::pow(s1, mono[k][0]) *
                      ((n == 2) ? std::pow(s2, mono[k][1]) : 1.0);
            a.v[i] = b * pv;
            sup = std::max(sup, std::abs(a.v[i]));
        }
        if (sup < 1e-12) continue;  // degenerate draw, resample

        double target = std::pow(ball_volume(n, r), -1.0 / p);
        for (auto& z : a.v) z *= target / sup;
        return Atom{x0, r, p, std::move(a)};
    }
    throw std::runtime_error("make_atom: failed to draw a non-degenerate atom");
}

}  // namespace oscillab
