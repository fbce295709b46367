#include "oscillab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscillab/checks.hpp"
#include "oscillab/lp_basis.hpp"
#include "oscillab/spectral.hpp"

namespace oscillab {

namespace {
using A2 = std::array<double, 2>;

double absxi(A2 xi, int n) { return (n == 1) ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]); }

// Slope over the bands with j >= 3 when at least two such bands exist,
// else j >= 2.
std::pair<std::vector<int>, double> fit_band_slope(const std::vector<int>& js,
                                                   const std::vector<double>& ratios) {
    for (int j_min : {3, 2}) {
        std::vector<double> xs, ys;
        std::vector<int> used;
        for (std::size_t i = 0; i < js.size(); ++i) {
            if (js[i] >= j_min && ratios[i] > 0) {
                xs.push_back(js[i]);
                ys.push_back(std::log2(ratios[i]));
                used.push_back(js[i]);
            }
        }
        if (xs.size() >= 2) return {used, fit_slope(xs, ys)};
    }
    return {{}, 0.0};
}

}  // namespace

std::uint64_t Rng::next_u64() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    double u1 = std::max(uniform(), 1e-300);
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2);
}

BandFamily parse_band_family(const std::string& name) {
    if (name == "random_band") return BandFamily::RandomBand;
    if (name == "chirp") return BandFamily::Chirp;
    if (name == "atom_band") return BandFamily::AtomBand;
    throw std::invalid_argument("unknown band family: " + name);
}

namespace {

// One spectral sample supported on supp psi_j.  `which` selects the family
// member; for the chirp family members 0/1 are the deterministic
// conjugate-phase and zero-phase profiles.
GridFunction band_sample(const OioSpec& spec, int j, BandFamily family, int which, Rng& rng) {
    const Grid& g = spec.grid;
    GridFunction F(g, Domain::Spectral);

    auto op_phase = [&](A2 xi) {
        if (spec.phase.h_xi) return spec.phase.h_xi(xi);
        return spec.phase.eval({0.0, 0.0}, xi);
    };

    switch (family) {
        case BandFamily::RandomBand: {
            for (std::size_t m = 0; m < F.size(); ++m) {
                A2 xi = g.xi_node(m);
                double w = LPBasis::psi_j_at(j, xi, g.n);
                if (w > 0) F.v[m] = w * cplx(rng.normal(), rng.normal());
            }
            break;
        }
        case BandFamily::Chirp: {
            double lambda = (which <= 1) ? 0.25 : rng.uniform(0.0, 0.5);
            bool conjugate = (which == 0) ? true : (which == 1 ? false : rng.uniform() < 0.5);
            double x0 = (which <= 1) ? 0.0 : rng.uniform(-g.L / 8, g.L / 8);
            for (std::size_t m = 0; m < F.size(); ++m) {
                A2 xi = g.xi_node(m);
                double w = LPBasis::psi_j_at(j, xi, g.n);
                if (w <= 0) continue;
                double r = absxi(xi, g.n);
                double ph = -x0 * xi[0];
                if (conjugate) ph -= op_phase(xi);
                F.v[m] = w * std::pow(r, -lambda) * std::polar(1.0, ph);
            }
            break;
        }
        case BandFamily::AtomBand: {
            double x0 = (which == 0) ? 0.0 : rng.uniform(-g.L / 8, g.L / 8);
            double x1 = (g.n == 2 && which != 0) ? rng.uniform(-g.L / 8, g.L / 8) : 0.0;
            for (std::size_t m = 0; m < F.size(); ++m) {
                A2 xi = g.xi_node(m);
                double w = LPBasis::psi_j_at(j, xi, g.n);
                if (w > 0) F.v[m] = w * std::polar(1.0, -(x0 * xi[0] + x1 * xi[1]));
            }
            break;
        }
    }
    return F;
}

}  // namespace

BandReport estimate_band_norms(const OioSpec& spec, double p, int j_lo, int j_hi,
                               int n_samples, std::uint64_t seed, BandFamily family) {
    if (!(p > 0)) throw std::invalid_argument("estimate_band_norms: p must be in (0, inf]");
    if (j_lo < 0 || j_hi < j_lo)
        throw std::invalid_argument("estimate_band_norms: bad band range");
    const Grid& g = spec.grid;
    if (std::ldexp(1.0, j_hi + 1) > g.xi_max_axis())
        throw std::invalid_argument("estimate_band_norms: top band exceeds the lattice");

    BandReport rep;
    rep.p = p;
    rep.seed = seed;
    rep.n_samples = n_samples;
    rep.family = (family == BandFamily::RandomBand)
                     ? "random_band"
                     : (family == BandFamily::Chirp ? "chirp" : "atom_band");

    // many applications of one x-dependent operator: assemble it once
    const bool assembled = !spec.is_multiplier() && g.total() <= 4096;
    AssembledOio dense;
    if (assembled) dense = assemble_oio(spec);
    auto apply = [&](const GridFunction& f) {
        return assembled ? dense.apply(f) : apply_oio(spec, f);
    };

    for (int j = j_lo; j <= j_hi; ++j) {
        Rng rng(seed ^ (0x100u + static_cast<std::uint64_t>(j)));
        double best = 0.0;
        int retries_left = 3 * n_samples;
        for (int s = 0; s < n_samples; ++s) {
            GridFunction F = band_sample(spec, j, family, s, rng);

            // denominator ||Psi_j(D) f||_p
            GridFunction FD(g, Domain::Spectral);
            GridFunction FN(g, Domain::Spectral);
            for (std::size_t m = 0; m < F.size(); ++m) {
                A2 xi = g.xi_node(m);
                double psij = LPBasis::psi_j_at(j, xi, g.n);
                double Psij = psij + LPBasis::psi_j_at(j + 1, xi, g.n) +
                              ((j == 0) ? 0.0 : LPBasis::psi_j_at(j - 1, xi, g.n));
                FD.v[m] = F.v[m] * Psij;
                FN.v[m] = F.v[m] * psij;
            }
            double den = lp_norm(inverse_transform(FD), p);
            if (den < 1e-12) {
                ++rep.discarded;
                if (retries_left-- > 0) --s;  // resample
                continue;
            }
            GridFunction Tf = apply_oio(spec, inverse_transform(FN));
            double num = lp_norm(Tf, p);
            best = std::max(best, num / den);
        }
        rep.js.push_back(j);
        rep.max_ratio.push_back(best);
    }
    auto [used, slope] = fit_band_slope(rep.js, rep.max_ratio);
    rep.fit_js = used;
    rep.slope = slope;
    return rep;
}

SharpnessProbe sharpness_probe(double k, double m, double p, double lambda,
                               std::vector<int> cutoffs, const Grid& grid) {
    if (!(k > 0)) throw std::invalid_argument("sharpness_probe: k must be positive");
    const int n = grid.n;
    const double invp = std::isinf(p) ? 0.0 : 1.0 / p;
    if (!(-lambda < n * invp - n))
        throw std::invalid_argument(
            "sharpness_probe: admissibility violated: need -lambda < n/p - n");
    // the second window inequality is the divergence condition; it only
    // constrains probes above the critical order
    if (m > critical_order(k, n, p) && !(-m + lambda - n + n * k / 2 < n * (k - 1) * invp))
        throw std::invalid_argument(
            "sharpness_probe: admissibility violated: need -m + lambda - n + nk/2 < n(k-1)/p");
    if (cutoffs.empty()) throw std::invalid_argument("sharpness_probe: no cutoffs");
    for (int J : cutoffs)
        if (std::ldexp(1.0, J + 1) > grid.xi_max_axis())
            throw std::invalid_argument("sharpness_probe: cutoff exceeds the lattice");

    SharpnessProbe probe;
    probe.k = k;
    probe.m = m;
    probe.p = p;
    probe.lambda = lambda;
    probe.cutoffs = cutoffs;

    const std::size_t T = grid.total();
    // operator symbol exp(i|xi|^k) (1 - psi0(xi)) |xi|^m
    std::vector<cplx> symbol(T);
    for (std::size_t i = 0; i < T; ++i) {
        A2 xi = grid.xi_node(i);
        double r = absxi(xi, n);
        double cut = 1.0 - psi0_of(xi, n);
        symbol[i] = (cut == 0.0)
                        ? cplx(0.0)
                        : std::polar(1.0, std::pow(r, k)) * cut * std::pow(r, m);
    }

    for (int J : cutoffs) {
        GridFunction F(grid, Domain::Spectral);
        for (std::size_t i = 0; i < T; ++i) {
            A2 xi = grid.xi_node(i);
            double r = absxi(xi, n);
            double cut = (1.0 - psi0_of(xi, n)) * psi0_radial(std::ldexp(r, -J));
            if (cut > 0) F.v[i] = cut * std::pow(r, -lambda);
        }
        GridFunction f = inverse_transform(F);
        GridFunction TF(grid, Domain::Spectral);
        for (std::size_t i = 0; i < T; ++i) TF.v[i] = F.v[i] * symbol[i];
        GridFunction Tf = inverse_transform(TF);
        probe.ratio.push_back(lp_norm(Tf, p) / lp_norm(f, p));
    }
    for (std::size_t i = 0; i + 1 < probe.ratio.size(); ++i)
        probe.growth_per_doubling.push_back(probe.ratio[i + 1] / probe.ratio[i]);
    return probe;
}

PropagatorPreset parse_propagator(const std::string& name, int n) {
    PropagatorPreset p;
    p.name = name;
    if (name == "schrodinger") {
        p.k = 2.0;
        p.dispersion = [n](A2 xi) { double r = absxi(xi, n); return r * r; };
    } else if (name == "wave") {
        p.k = 1.0;
        p.dispersion = [n](A2 xi) { return absxi(xi, n); };
    } else if (name == "water") {
        p.k = 0.5;
        p.dispersion = [n](A2 xi) { return std::sqrt(absxi(xi, n)); };
    } else if (name == "capillary") {
        p.k = 1.5;
        p.dispersion = [n](A2 xi) { return std::pow(absxi(xi, n), 1.5); };
    } else if (name == "kleingordon") {
        p.k = 1.0;
        p.dispersion = [n](A2 xi) {
            double r = absxi(xi, n);
            return std::sqrt(1 + r * r);
        };
    } else if (name == "ho") {
        p.k = 2.0;
        p.harmonic_oscillator = true;
    } else {
        throw std::invalid_argument("unknown propagator preset: " + name);
    }
    return p;
}

std::vector<GridFunction> propagate(const PropagatorPreset& preset, const GridFunction& f0,
                                    const std::vector<double>& times) {
    std::vector<GridFunction> out;
    out.reserve(times.size());
    if (preset.harmonic_oscillator) {
        if (f0.grid.n != 1)
            throw std::invalid_argument("propagate: harmonic oscillator preset is 1d");
        for (double t : times) {
            if (!(std::abs(2 * t) <= M_PI / 2 - 0.2))
                throw std::invalid_argument("propagate: time outside the ho validity window");
            if (t == 0.0) {
                out.push_back(f0);
                continue;
            }
            char key[40], akey[48];
            std::snprintf(key, sizeof key, "ho:%.17g", t);
            std::snprintf(akey, sizeof akey, "const:%.17g", std::pow(std::cos(2 * t), -0.5));
            OioSpec spec{parse_phase(key, 1), parse_amplitude(akey, 1), f0.grid};
            out.push_back(apply_oio(spec, f0));
        }
        return out;
    }
    GridFunction F = forward_transform(f0);
    for (double t : times) {
        GridFunction U(f0.grid, Domain::Spectral);
        for (std::size_t m = 0; m < F.size(); ++m) {
            A2 xi = f0.grid.xi_node(m);
            U.v[m] = F.v[m] * std::polar(1.0, t * preset.dispersion(xi));
        }
        out.push_back(inverse_transform(U));
    }
    return out;
}

DispersiveReport dispersive_estimate_report(const PropagatorPreset& preset, double s,
                                            double p, double q,
                                            const std::vector<double>& times,
                                            int n_samples, std::uint64_t seed,
                                            const Grid& grid, int j_lo, int j_hi) {
    if (std::isinf(p) && !(q < INFINITY))
        throw std::invalid_argument(
            "dispersive_estimate_report: p = inf requires q < inf (Besov path)");
    if (preset.harmonic_oscillator)
        throw std::invalid_argument(
            "dispersive_estimate_report: band reports use dispersion presets; "
            "the harmonic oscillator has its own oracle tests");
    for (double t : times)
        if (std::abs(t) > 1.0)
            throw std::invalid_argument("dispersive_estimate_report: |t| <= 1 required");

    DispersiveReport rep;
    rep.s = s;
    rep.p = p;
    rep.q = q;
    rep.times = times;

    const Grid& g = grid;
    const double mk = critical_order(preset.k, g.n, p);
    const double t_max = *std::max_element(times.begin(), times.end(),
                                           [](double a, double b) {
                                               return std::abs(a) < std::abs(b);
                                           });

    // Besov-ratio part on broad random data (smaller j_max keeps the basis
    // coverage guard comfortable).
    {
        LPBasis basis(j_hi, g);
        Rng rng(seed);
        double cut = std::ldexp(1.0, j_hi - 1);
        for (int smp = 0; smp < std::max(1, n_samples / 2); ++smp) {
            GridFunction F(g, Domain::Spectral);
            for (std::size_t m = 0; m < F.size(); ++m) {
                A2 xi = g.xi_node(m);
                if (absxi(xi, g.n) <= cut) F.v[m] = cplx(rng.normal(), rng.normal());
            }
            GridFunction f = inverse_transform(F);
            double den = besov_norm(f, s - mk, p, q, basis);
            if (den < 1e-12) continue;
            auto us = propagate(preset, f, times);
            for (const auto& u : us)
                rep.R_max = std::max(rep.R_max, besov_norm(u, s, p, q, basis) / den);
        }
    }

    // per-band growth of the propagator
    OioSpec mult_spec;  // only used as the phase carrier for band_sample
    mult_spec.grid = g;
    mult_spec.phase.n = g.n;
    mult_spec.phase.h_xi = [&preset, tm = t_max](A2 xi) { return tm * preset.dispersion(xi); };

    for (int j = j_lo; j <= j_hi; ++j) {
        Rng rng(seed ^ (0x9000u + static_cast<std::uint64_t>(j)));
        double best = 0.0;
        for (int smp = 0; smp < n_samples; ++smp) {
            BandFamily fam = (smp < 2) ? BandFamily::Chirp
                                       : (smp % 2 ? BandFamily::RandomBand : BandFamily::Chirp);
            GridFunction F = band_sample(mult_spec, j, fam, smp, rng);

            GridFunction FJ(g, Domain::Spectral);
            for (std::size_t m = 0; m < F.size(); ++m)
                FJ.v[m] = F.v[m] * LPBasis::psi_j_at(j, g.xi_node(m), g.n);
            double den = lp_norm(inverse_transform(FJ), p);
            if (den < 1e-12) continue;
            for (double t : times) {
                GridFunction UJ(g, Domain::Spectral);
                for (std::size_t m = 0; m < FJ.size(); ++m) {
                    A2 xi = g.xi_node(m);
                    UJ.v[m] = FJ.v[m] * std::polar(1.0, t * preset.dispersion(xi));
                }
                best = std::max(best, lp_norm(inverse_transform(UJ), p) / den);
            }
        }
        rep.js.push_back(j);
        rep.band_ratio.push_back(best);
    }
    auto [used, slope] = fit_band_slope(rep.js, rep.band_ratio);
    rep.fit_js = used;
    rep.band_slope = slope;
    return rep;
}

}  // namespace oscillab
