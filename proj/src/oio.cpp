#include "oscillab/oio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oscillab/spectral.hpp"

namespace oscillab {

namespace {

using A2 = std::array<double, 2>;

void check_spec(const OioSpec& spec, const GridFunction& f, const char* who) {
    if (!(f.grid == spec.grid))
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
    if (f.domain != Domain::Spatial)
        throw std::invalid_argument(std::string(who) + ": input must be spatial");
    f.require_finite(who);
}

GridFunction apply_multiplier_path(const OioSpec& spec, const GridFunction& f, bool adjoint) {
    const Grid& g = spec.grid;
    GridFunction F = forward_transform(f);
    for (std::size_t m = 0; m < F.size(); ++m) {
        A2 xi = g.xi_node(m);
        cplx sym = std::polar(1.0, spec.phase.h_xi(xi)) * spec.amp.eval({0.0, 0.0}, xi);
        if (!std::isfinite(sym.real()) || !std::isfinite(sym.imag()))
            throw std::domain_error("apply_oio: non-finite symbol value");
        F.v[m] *= adjoint ? std::conj(sym) : sym;
    }
    return inverse_transform(F);
}

GridFunction apply_quadrature(const OioSpec& spec, const GridFunction& f, bool parallel) {
    const Grid& g = spec.grid;
    GridFunction F = forward_transform(f);
    const double w = 1.0 / std::pow(g.L, g.n);  // dxi^n/(2pi)^n
    const std::size_t T = g.total();

    // cache frequency nodes and weighted spectral coefficients
    std::vector<A2> xis(T);
    for (std::size_t m = 0; m < T; ++m) xis[m] = g.xi_node(m);
    std::vector<cplx> Fw(T);
    for (std::size_t m = 0; m < T; ++m) Fw[m] = F.v[m] * w;

    GridFunction out(g, Domain::Spatial);
    const auto& phase = spec.phase;
    const auto& amp = spec.amp;

    bool bad = false;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(T); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        A2 x = g.x_node(i);
        cplx acc(0.0);
        for (std::size_t m = 0; m < T; ++m) {
            double ph = phase.eval(x, xis[m]);
            cplx av = amp.eval(x, xis[m]);
            acc += std::polar(1.0, ph) * av * Fw[m];
        }
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag())) bad = true;
        out.v[i] = acc;
    }
    if (bad) throw std::domain_error("apply_oio: non-finite phase/amplitude values");
    return out;
}

GridFunction adjoint_quadrature(const OioSpec& spec, const GridFunction& gfun, bool parallel) {
    const Grid& g = spec.grid;
    const double wx = std::pow(g.dx(), g.n);
    const std::size_t T = g.total();

    std::vector<A2> xs(T);
    for (std::size_t i = 0; i < T; ++i) xs[i] = g.x_node(i);

    GridFunction G(g, Domain::Spectral);
    const auto& phase = spec.phase;
    const auto& amp = spec.amp;

    bool bad = false;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t mm = 0; mm < static_cast<std::ptrdiff_t>(T); ++mm) {
        const std::size_t m = static_cast<std::size_t>(mm);
        A2 xi = g.xi_node(m);
        cplx acc(0.0);
        for (std::size_t i = 0; i < T; ++i) {
            double ph = phase.eval(xs[i], xi);
            cplx av = amp.eval(xs[i], xi);
            acc += std::polar(1.0, -ph) * std::conj(av) * gfun.v[i];
        }
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag())) bad = true;
        G.v[m] = acc * wx;
    }
    if (bad) throw std::domain_error("apply_adjoint: non-finite phase/amplitude values");
    return inverse_transform(G);
}

// K(x, y) = sum_m S_m e^{-i y.xi_m} dxi^n/(2pi)^n  for one spatial row x:
// equal to conj(inverse_transform(conj(S))).
std::vector<cplx> row_kernel(const Grid& g, const std::vector<cplx>& S) {
    GridFunction tmp(g, Domain::Spectral);
    for (std::size_t m = 0; m < S.size(); ++m) tmp.v[m] = std::conj(S[m]);
    GridFunction inv = inverse_transform(tmp);
    std::vector<cplx> out(inv.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(inv.v[i]);
    return out;
}

Jet<double> psi0_scaled_jet(A2 xi, int n, double scale) {
    const JetTable& tab = JetTable::get(2 * n);
    Jet<double> r2(tab);
    for (int a = 0; a < n; ++a) {
        auto v = Jet<double>::variable(tab, xi[a], n + a);
        r2 += v * v;
    }
    double r = ((n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1])) / scale;
    if (r <= 1.0 + 1e-12 || r >= 2.0 - 1e-12)
        return Jet<double>::constant(tab, r <= 1.5 ? 1.0 : 0.0);
    Jet<double> rj = sqrt(r2) / scale;
    Jet<double> ha = exp(-1.0 * recip(2.0 - rj));
    Jet<double> hb = exp(-1.0 * recip(rj - 1.0));
    return ha / (ha + hb);
}

}  // namespace

GridFunction apply_oio(const OioSpec& spec, const GridFunction& f, Exec exec) {
    check_spec(spec, f, "apply_oio");
    if (exec == Exec::Auto && spec.is_multiplier()) return apply_multiplier_path(spec, f, false);
    return apply_quadrature(spec, f, exec != Exec::Serial);
}

GridFunction apply_oio_reference(const OioSpec& spec, const GridFunction& f) {
    check_spec(spec, f, "apply_oio_reference");
    return apply_quadrature(spec, f, false);
}

GridFunction apply_adjoint(const OioSpec& spec, const GridFunction& g, Exec exec) {
    check_spec(spec, g, "apply_adjoint");
    if (exec == Exec::Auto && spec.is_multiplier()) return apply_multiplier_path(spec, g, true);
    return adjoint_quadrature(spec, g, exec != Exec::Serial);
}

AssembledOio assemble_oio(const OioSpec& spec, std::size_t max_entries) {
    const Grid& g = spec.grid;
    const std::size_t T = g.total();
    if (T > max_entries / T)
        throw std::invalid_argument("assemble_oio: grid too large to materialize");
    AssembledOio out;
    out.grid = g;
    out.M.resize(T * T);
    const double w = 1.0 / std::pow(g.L, g.n);
    std::vector<A2> xis(T);
    for (std::size_t m = 0; m < T; ++m) xis[m] = g.xi_node(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(T); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        A2 x = g.x_node(i);
        cplx* row = out.M.data() + i * T;
        for (std::size_t m = 0; m < T; ++m)
            row[m] = std::polar(1.0, spec.phase.eval(x, xis[m])) * spec.amp.eval(x, xis[m]) * w;
    }
    return out;
}

GridFunction AssembledOio::apply(const GridFunction& f) const {
    if (!(f.grid == grid)) throw std::invalid_argument("AssembledOio::apply: grid mismatch");
    GridFunction F = forward_transform(f);
    const std::size_t T = grid.total();
    GridFunction out(grid, Domain::Spatial);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(T); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const cplx* row = M.data() + i * T;
        cplx acc(0.0);
        for (std::size_t m = 0; m < T; ++m) acc += row[m] * F.v[m];
        out.v[i] = acc;
    }
    return out;
}

KernelSlice kernel_slice(const OioSpec& spec, int j, std::array<int, 2> beta,
                         const LPBasis& basis, int scan_rows, int keep_rows) {
    if (j < 0 || j > basis.j_max())
        throw std::invalid_argument("kernel_slice: band outside the basis");
    const Grid& g = spec.grid;
    const std::size_t T = g.total();

    // Rows inside the amplitude's spatial support.
    double xr = std::min(spec.amp.meta.x_support_radius, g.L / 2);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < T; ++i) {
        A2 x = g.x_node(i);
        double r = (g.n == 1) ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        if (r <= xr) candidates.push_back(i);
    }
    if (candidates.empty()) candidates.push_back(T / 2);
    std::vector<std::size_t> scan;
    std::size_t step = std::max<std::size_t>(1, candidates.size() / scan_rows);
    for (std::size_t k = 0; k < candidates.size(); k += step) scan.push_back(candidates[k]);

    const auto& band = basis.psi(j);
    std::vector<std::size_t> active;  // frequency bins in the band
    for (std::size_t m = 0; m < T; ++m)
        if (band[m] != 0.0) active.push_back(m);

    KernelSlice out;
    out.j = j;
    out.beta = beta;
    std::size_t keep_step = std::max<std::size_t>(1, scan.size() / std::max(keep_rows, 1));

    std::vector<double> sups(scan.size(), 0.0);
    std::vector<std::vector<cplx>> kept(scan.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(scan.size()); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        A2 x = g.x_node(scan[k]);
        std::vector<cplx> S(T, cplx(0.0));
        for (std::size_t m : active) {
            A2 xi = g.xi_node(m);
            cplx fac = std::polar(1.0, spec.phase.eval(x, xi)) * spec.amp.eval(x, xi) * band[m];
            cplx pw(1.0);
            for (int a = 0; a < g.n; ++a)
                for (int b = 0; b < beta[a]; ++b) pw *= cplx(0.0, -xi[a]);
            S[m] = fac * pw;
        }
        auto row = row_kernel(g, S);
        double sup = 0.0;
        for (const auto& z : row) sup = std::max(sup, std::abs(z));
        sups[k] = sup;
        if (k % keep_step == 0 && kept[k].empty()) kept[k] = std::move(row);
    }

    for (std::size_t k = 0; k < scan.size(); ++k) {
        out.sup_abs = std::max(out.sup_abs, sups[k]);
        if (!kept[k].empty()) {
            out.rows.push_back(scan[k]);
            out.K.push_back(std::move(kept[k]));
        }
    }
    double denom = std::pow(2.0, j * (spec.amp.meta.order_m + beta[0] + beta[1] + g.n));
    out.normalized_const = out.sup_abs / denom;
    return out;
}

void export_kernel_csv(const KernelSlice& slice, const Grid& grid, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "x,y,absK,argK\n");
    for (std::size_t r = 0; r < slice.rows.size(); ++r) {
        A2 x = grid.x_node(slice.rows[r]);
        for (std::size_t i = 0; i < slice.K[r].size(); ++i) {
            A2 y = grid.x_node(i);
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", x[0], y[0],
                         std::abs(slice.K[r][i]), std::arg(slice.K[r][i]));
        }
    }
    std::fclose(fp);
}

DecayFit lowfreq_kernel_decay(const OioSpec& spec, double mu, double eps) {
    const Grid& g = spec.grid;
    if (g.n != 1)
        throw std::invalid_argument("lowfreq_kernel_decay: 1d slices only");
    const std::size_t T = g.total();

    // kernel row at x0 = 0
    std::size_t i0 = static_cast<std::size_t>(g.N / 2);
    A2 x0 = g.x_node(i0);
    std::vector<cplx> S(T, cplx(0.0));
    for (std::size_t m = 0; m < T; ++m) {
        A2 xi = g.xi_node(m);
        cplx av = spec.amp.eval(x0, xi);
        if (av == cplx(0.0)) continue;
        S[m] = std::polar(1.0, spec.phase.eval(x0, xi)) * av;
    }
    auto row = row_kernel(g, S);

    DecayFit fit;
    const double floor = 1e-13;
    const double step = std::pow(2.0, 0.25);
    const double d_max = g.L / 8.0;  // keeps periodization images below ~5%
    double d = 2.0;
    while (d <= d_max) {
        // envelope: max |K| over [d/sqrt(step), d*sqrt(step)] on both sides,
        // so oscillation nulls cannot punch holes in the ladder
        double env = 0.0;
        for (int side : {-1, 1}) {
            double ylo = x0[0] + side * d / std::sqrt(step);
            double yhi = x0[0] + side * d * std::sqrt(step);
            if (ylo > yhi) std::swap(ylo, yhi);
            auto blo = static_cast<std::ptrdiff_t>(std::floor((ylo + g.L / 2) / g.dx()));
            auto bhi = static_cast<std::ptrdiff_t>(std::ceil((yhi + g.L / 2) / g.dx()));
            for (std::ptrdiff_t b = blo; b <= bhi; ++b) {
                if (b < 0 || b >= static_cast<std::ptrdiff_t>(T)) continue;
                env = std::max(env, std::abs(row[static_cast<std::size_t>(b)]));
            }
        }
        if (env <= floor) {
            fit.noise_clipped = true;
            break;
        }
        fit.samples.push_back({d, env});
        d *= step;
    }
    if (fit.samples.size() < 4)
        throw std::runtime_error("lowfreq_kernel_decay: too few far-field points above noise");

    // far field = the deepest six usable ladder points (about 1.5 octaves)
    std::size_t first = (fit.samples.size() > 6) ? fit.samples.size() - 6 : 0;
    double d_hi = fit.samples.back().first;

    std::vector<double> xs, ys;
    for (std::size_t i = first; i < fit.samples.size(); ++i) {
        xs.push_back(std::log(std::hypot(1.0, fit.samples[i].first)));  // log <d>
        ys.push_back(std::log(fit.samples[i].second));
    }
    fit.exponent = -fit_slope(xs, ys);
    fit.fit_lo = fit.samples[first].first;
    fit.fit_hi = d_hi;
    fit.points = static_cast<int>(xs.size());
    (void)mu;
    (void)eps;
    return fit;
}

std::array<Amplitude, 3> frequency_split(const Amplitude& a, double R) {
    if (!(R > 1.0)) throw std::invalid_argument("frequency_split: R must be > 1");
    const int n = a.n;
    auto low_eval = [n](A2 xi) { return psi0_of(xi, n); };
    auto low_jet = [n](A2 xi) { return psi0_scaled_jet(xi, n, 1.0); };
    auto mid_eval = [n, R](A2 xi) {
        return psi0_of({xi[0] / R, xi[1] / R}, n) - psi0_of(xi, n);
    };
    auto mid_jet = [n, R](A2 xi) {
        return psi0_scaled_jet(xi, n, R) - psi0_scaled_jet(xi, n, 1.0);
    };
    auto high_eval = [n, R](A2 xi) { return 1.0 - psi0_of({xi[0] / R, xi[1] / R}, n); };
    auto high_jet = [n, R](A2 xi) {
        const JetTable& tab = JetTable::get(2 * n);
        return Jet<double>::constant(tab, 1.0) - psi0_scaled_jet(xi, n, R);
    };
    std::array<Amplitude, 3> out{
        amplitude_with_xi_cutoff(a, low_eval, low_jet, "low"),
        amplitude_with_xi_cutoff(a, mid_eval, mid_jet, "mid"),
        amplitude_with_xi_cutoff(a, high_eval, high_jet, "high"),
    };
    // the low piece is supported in B(0,2)
    out[0].meta.order_m = a.meta.order_m;
    return out;
}

CompositionResult compose_pseudo(const std::function<double(A2)>& b, double t,
                                 const OioSpec& spec, int j, const LPBasis& basis,
                                 bool store_symbols) {
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("compose_pseudo: t must be in (0,1]");
    if (j < 0 || j > basis.j_max())
        throw std::invalid_argument("compose_pseudo: band outside the basis");
    const Grid& g = spec.grid;
    const std::size_t T = g.total();

    const auto& band = basis.psi(j);
    CompositionResult res;
    res.t = t;
    res.j = j;
    for (std::size_t m = 0; m < T; ++m)
        if (band[m] != 0.0) res.band_bins.push_back(m);

    // multiplier symbol b(t eta) sampled on the lattice
    std::vector<cplx> bt(T);
    for (std::size_t m = 0; m < T; ++m) {
        A2 eta = g.xi_node(m);
        bt[m] = b({t * eta[0], t * eta[1]});
    }

    if (store_symbols) {
        res.sigma.assign(res.band_bins.size(), {});
        res.leading.assign(res.band_bins.size(), {});
    }
    std::vector<double> sup_s(res.band_bins.size(), 0.0), sup_l(res.band_bins.size(), 0.0),
        sup_r(res.band_bins.size(), 0.0);
    // phi = x.xi + h(xi) has grad_x phi = xi identically; skip the jet then
    const bool grad_is_xi = static_cast<bool>(spec.phase.h_xi);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(res.band_bins.size()); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        A2 xi = g.xi_node(res.band_bins[k]);

        GridFunction gx(g, Domain::Spatial);
        for (std::size_t i = 0; i < T; ++i) {
            A2 x = g.x_node(i);
            gx.v[i] = std::polar(1.0, spec.phase.eval(x, xi)) * spec.amp.eval(x, xi);
        }
        GridFunction filtered = frequency_multiplier(gx, std::span<const cplx>(bt));

        std::vector<cplx> sig(T), lead(T);
        for (std::size_t i = 0; i < T; ++i) {
            A2 x = g.x_node(i);
            sig[i] = std::polar(1.0, -spec.phase.eval(x, xi)) * filtered.v[i];
            std::array<double, 2> grad = grad_is_xi ? xi : spec.phase.grad_x(x, xi);
            lead[i] = b({t * grad[0], t * grad[1]}) * spec.amp.eval(x, xi);
            sup_s[k] = std::max(sup_s[k], std::abs(sig[i]));
            sup_l[k] = std::max(sup_l[k], std::abs(lead[i]));
            sup_r[k] = std::max(sup_r[k], std::abs(sig[i] - lead[i]));
        }
        if (store_symbols) {
            res.sigma[k] = std::move(sig);
            res.leading[k] = std::move(lead);
        }
    }
    for (std::size_t k = 0; k < res.band_bins.size(); ++k) {
        res.sup_sigma = std::max(res.sup_sigma, sup_s[k]);
        res.sup_leading = std::max(res.sup_leading, sup_l[k]);
        res.sup_remainder = std::max(res.sup_remainder, sup_r[k]);
    }
    return res;
}

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_slope: need at least two points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oscillab
