#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscillab/oio.hpp"
#include "oscillab/spaces.hpp"

namespace oscillab {

/// Test-function families for the band-norm experiments.
///   random_band: gaussian spectral coefficients tapered by psi_j
///   chirp:       |xi|^-lambda profiles with spectral phase conjugate to the
///                operator phase (focused output) and the zero-phase member
///                (focused input), plus randomized variants
///   atom_band:   band-filtered point masses at random centers
enum class BandFamily { RandomBand, Chirp, AtomBand };

BandFamily parse_band_family(const std::string& name);

/// Per-band measured ratios ||T psi_j(D) f||_p / ||Psi_j(D) f||_p and the
/// fitted dyadic growth slope.
struct BandReport {
    double p = 2.0;
    std::string family;
    std::uint64_t seed = 0;
    int n_samples = 0;
    std::vector<int> js;
    std::vector<double> max_ratio;
    std::vector<int> fit_js;   // bands used in the slope fit (j >= 3)
    double slope = 0.0;
    int discarded = 0;         // samples resampled due to tiny denominators
};

BandReport estimate_band_norms(const OioSpec& spec, double p, int j_lo, int j_hi,
                               int n_samples, std::uint64_t seed, BandFamily family);

/// Miyachi-type sharpness probe: f_lambda truncated at cutoffs 2^J, pushed
/// through T with a = (1-psi0)|xi|^m and phi = x.xi + |xi|^k.
struct SharpnessProbe {
    double k, m, p, lambda;
    std::vector<int> cutoffs;
    std::vector<double> ratio;                 // ||T f_J||_p / ||f_J||_p
    std::vector<double> growth_per_doubling;   // ratio[J+1]/ratio[J]
};

SharpnessProbe sharpness_probe(double k, double m, double p, double lambda,
                               std::vector<int> cutoffs, const Grid& grid);

/// Dispersion presets for the Cauchy-problem experiments.
struct PropagatorPreset {
    std::string name;
    double k = 2.0;                               // F^k order of the dispersion
    std::function<double(std::array<double, 2>)> dispersion;  // phi(xi)
    bool harmonic_oscillator = false;
};

/// "schrodinger" (|xi|^2), "wave" (|xi|), "water" (|xi|^0.5),
/// "capillary" (|xi|^1.5), "kleingordon" (<xi>), "ho" (full phase).
PropagatorPreset parse_propagator(const std::string& name, int n);

/// u(.,t) for each time: multiplier exp(i t phi(xi)) for dispersion presets,
/// the full oscillatory integral for the harmonic oscillator.
std::vector<GridFunction> propagate(const PropagatorPreset& preset, const GridFunction& f0,
                                    const std::vector<double>& times);

/// sup_t ||u(t)||_{B^s_{p,q}} / ||f||_{B^{s-m_k(p)}_{p,q}} over a sample
/// family, plus per-band growth slopes of sup_t ||psi_j u(t)||_p / ||psi_j f||_p.
struct DispersiveReport {
    double s, p, q;
    std::vector<double> times;
    double R_max = 0.0;                       // worst Besov ratio over samples
    std::vector<int> js;
    std::vector<double> band_ratio;           // per-band sup over samples/times
    std::vector<int> fit_js;
    double band_slope = 0.0;
};

DispersiveReport dispersive_estimate_report(const PropagatorPreset& preset, double s,
                                            double p, double q,
                                            const std::vector<double>& times,
                                            int n_samples, std::uint64_t seed,
                                            const Grid& grid, int j_lo, int j_hi);

/// Deterministic uniform/normal draws (so seeds freeze results across
/// standard libraries).
struct Rng {
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t state;
    std::uint64_t next_u64();
    double uniform();              // [0,1)
    double uniform(double a, double b);
    double normal();
};

}  // namespace oscillab
