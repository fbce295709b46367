#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oscillab {

using cplx = std::complex<double>;

/// Periodic spatial lattice with the matched frequency lattice.
///
/// Spatial nodes are x_i = -L/2 + i*L/N per axis; frequency nodes are
/// xi_m = 2*pi*m/L with m = -N/2..N/2-1.  Frequency values are stored in
/// FFT bin order (0,1,..,N/2-1,-N/2,..,-1) so that transforms map bins
/// one-to-one.
struct Grid {
    int n = 1;       // dimension, 1 or 2
    double L = 1.0;  // period per axis
    int N = 8;       // samples per axis, power of two

    Grid() = default;
    Grid(int n_, double L_, int N_);

    double dx() const { return L / N; }
    double dxi() const { return 2.0 * M_PI / L; }
    std::size_t total() const;

    /// Spatial coordinate of axis index i (0 <= i < N).
    double x_axis(int i) const { return -L / 2 + i * dx(); }
    /// Frequency of FFT bin b (0 <= b < N), signed convention.
    double xi_axis(int b) const {
        int m = (b < N / 2) ? b : b - N;
        return m * dxi();
    }
    /// Largest representable |xi| per axis (the Nyquist magnitude).
    double xi_max_axis() const { return (N / 2) * dxi(); }

    // Flat index <-> per-axis indices (row-major, axis 0 slow).
    std::size_t flat(std::span<const int> idx) const;
    std::array<int, 2> unflat(std::size_t f) const;

    std::array<double, 2> x_node(std::size_t f) const;
    std::array<double, 2> xi_node(std::size_t f) const;

    bool operator==(const Grid& o) const {
        return n == o.n && L == o.L && N == o.N;
    }
};

enum class Domain : std::uint8_t { Spatial = 0, Spectral = 1 };

/// Complex samples on a Grid, flagged spatial or spectral.
struct GridFunction {
    Grid grid;
    Domain domain = Domain::Spatial;
    std::vector<cplx> v;

    GridFunction() = default;
    GridFunction(const Grid& g, Domain d)
        : grid(g), domain(d), v(g.total(), cplx(0.0)) {}

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }

    bool all_finite() const;
    /// Throws std::domain_error naming `what` if any entry is non-finite.
    void require_finite(const std::string& what) const;
};

/// Build a spatial GridFunction by evaluating f at every node.
template <class F>
GridFunction sample_spatial(const Grid& g, F&& f) {
    GridFunction out(g, Domain::Spatial);
    for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = f(g.x_node(i));
    return out;
}

/// Build a spectral GridFunction by evaluating F at every frequency node.
template <class F>
GridFunction sample_spectral(const Grid& g, F&& f) {
    GridFunction out(g, Domain::Spectral);
    for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = f(g.xi_node(i));
    return out;
}

// Binary serialization: <base>.bin holds little-endian (re,im) double pairs
// row-major; <base>.json is the sidecar {n,L,N,flag}.
void save_gridfunction(const GridFunction& f, const std::string& base);
GridFunction load_gridfunction(const std::string& base);

/// CSV export of coordinates and |f| per node, for plotting.
void export_abs_csv(const GridFunction& f, const std::string& path);

}  // namespace oscillab
