#pragma once

#include "oscillab/grid.hpp"
#include "oscillab/lp_basis.hpp"
#include "oscillab/phase.hpp"

namespace oscillab {

/// An oscillatory integral operator: phase, amplitude, and the grid that
/// discretizes them.
struct OioSpec {
    PhaseFunction phase;
    Amplitude amp;
    Grid grid;

    /// True when the operator reduces to a Fourier multiplier
    /// (phi = x.xi + h(xi) and a = a(xi)).
    bool is_multiplier() const {
        return static_cast<bool>(phase.h_xi) && amp.meta.x_independent;
    }
};

enum class Exec {
    Auto,      // multiplier fast path when available, else parallel quadrature
    Parallel,  // OpenMP row-parallel direct quadrature
    Serial     // single-thread reference quadrature
};

/// T f(x_i) = sum_m exp(i phi(x_i,xi_m)) a(x_i,xi_m) fhat(xi_m) dxi^n/(2pi)^n.
GridFunction apply_oio(const OioSpec& spec, const GridFunction& f, Exec exec = Exec::Auto);

/// Serial reference implementation (identical arithmetic, no OpenMP).
GridFunction apply_oio_reference(const OioSpec& spec, const GridFunction& f);

/// Exact discrete adjoint: G(xi_m) = sum_i exp(-i phi) conj(a) g(x_i) dx^n,
/// then the inverse transform.  <Tf,g> = <f,T*g> holds to rounding.
GridFunction apply_adjoint(const OioSpec& spec, const GridFunction& g, Exec exec = Exec::Auto);

/// Dense assembled operator for repeated application of the same spec
/// (streamed batches of f): entries exp(i phi) a dxi^n/(2pi)^n, row per
/// spatial node.  Worth it when many applications share one spec.
struct AssembledOio {
    Grid grid;
    std::vector<cplx> M;  // row-major [x_index * total + xi_bin]
    GridFunction apply(const GridFunction& f) const;
};

/// Refuses grids with total()^2 beyond `max_entries` (memory guard).
AssembledOio assemble_oio(const OioSpec& spec, std::size_t max_entries = std::size_t(1) << 26);

/// One row subset of the band-localized kernel
/// K_j(x,y) = int psi_j(xi) a(x,xi) e^{i phi(x,xi)} e^{-i y.xi} dxi/(2pi)^n
/// differentiated beta times in y, with its sup and the constant normalized
/// by 2^{j(m+|beta|+n)}.  Rows are streamed; only `rows` are kept.
struct KernelSlice {
    int j = 0;
    std::array<int, 2> beta{0, 0};
    std::vector<std::size_t> rows;        // stored spatial row indices
    std::vector<std::vector<cplx>> K;     // one vector of y-samples per row
    double sup_abs = 0.0;                 // over all scanned rows
    double normalized_const = 0.0;        // sup / 2^{j(m+|beta|+n)}
};

/// Scans x rows inside the amplitude support (up to `scan_rows` of them,
/// evenly spaced), keeps at most `keep_rows` of the scanned rows.
KernelSlice kernel_slice(const OioSpec& spec, int j, std::array<int, 2> beta,
                         const LPBasis& basis, int scan_rows = 65, int keep_rows = 5);

void export_kernel_csv(const KernelSlice& slice, const Grid& grid, const std::string& path);

/// Far-field decay fit of the low-frequency kernel K(x0, y): the slope of
/// log|K| against log<x0-y> over a dyadic window, envelope-smoothed.
struct DecayFit {
    double exponent = 0.0;        // fitted decay power (positive)
    double fit_lo = 0.0, fit_hi = 0.0;  // distance window actually used
    int points = 0;
    bool noise_clipped = false;   // window was shrunk at the 1e-13 floor
    std::vector<std::pair<double, double>> samples;  // (distance, |K|)
};

DecayFit lowfreq_kernel_decay(const OioSpec& spec_lowfreq, double mu, double eps);

/// Splits a into (a_L, a_M, a_H) = (psi0(xi) a, (psi0(xi/R)-psi0(xi)) a,
/// (1-psi0(xi/R)) a).  Requires R > 1.
std::array<Amplitude, 3> frequency_split(const Amplitude& a, double R);

/// Composition symbol of b(tD) T_a^phi on one dyadic band:
/// sigma_t(x,xi) computed exactly at the discrete level, its leading term
/// b(t grad_x phi(x,xi)) a(x,xi), and the remainder.
struct CompositionResult {
    double t = 0.0;
    int j = 0;
    std::vector<std::size_t> band_bins;       // frequency bins in the band
    std::vector<std::vector<cplx>> sigma;     // [bin][x]
    std::vector<std::vector<cplx>> leading;   // [bin][x]
    double sup_sigma = 0.0;
    double sup_leading = 0.0;
    double sup_remainder = 0.0;
};

/// `store_symbols` keeps the full sigma/leading samples (memory heavy on
/// wide bands); the sups are always filled.
CompositionResult compose_pseudo(const std::function<double(std::array<double, 2>)>& b,
                                 double t, const OioSpec& spec, int j, const LPBasis& basis,
                                 bool store_symbols = false);

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace oscillab
