#pragma once

#include <cstdint>
#include <string>

#include "oscillab/grid.hpp"
#include "oscillab/lp_basis.hpp"

namespace oscillab {

enum class SpaceFamily { Lp, Besov, TriebelLizorkin, SobolevH, LocalHardy, LocalBMO };

/// Which quasi-norm to compute: family plus the (s, p, q) parameters.
struct SpaceSpec {
    SpaceFamily family = SpaceFamily::Lp;
    double s = 0.0;
    double p = 2.0;
    double q = 2.0;

    void validate() const;
    std::string str() const;
};

/// Parses "B:s=0.5,p=1,q=2", "F:s=0,p=2,q=2", "Lp:p=4", "hp:p=0.5",
/// "H:s=1,p=2", "bmo".  "inf" is accepted for p and q.
SpaceSpec parse_space_spec(const std::string& text);

/// Besov-Lipschitz quasi-norm (sum_j 2^(jqs) ||psi_j(D)f||_p^q)^(1/q),
/// max over j when q = inf.
double besov_norm(const GridFunction& f, double s, double p, double q, const LPBasis& basis);

/// Triebel-Lizorkin quasi-norm || (sum_j 2^(jqs) |psi_j(D)f|^q)^(1/q) ||_p.
/// p = inf is accepted only for q = 2, computed as the bmo surrogate of the
/// lifted function.
double triebel_norm(const GridFunction& f, double s, double p, double q, const LPBasis& basis);

/// Sobolev norm ||<D>^s f||_p.
double sobolev_norm(const GridFunction& f, double s, double p);

/// Local Hardy quasi-norm with the maximal function discretized over
/// t = 2^-l, l = 0..l_max (l_max chosen from the grid when negative).
/// Requires 0 < p <= 1; p > 1 callers use lp_norm (the spaces coincide).
double local_hardy_quasinorm(const GridFunction& f, double p, int l_max = -1);

/// Local BMO norm: max mean oscillation over grid-aligned dyadic cubes of
/// side <= 1, plus ||psi_0(D) f||_inf.
double local_bmo_norm(const GridFunction& f);

/// Dispatch on a SpaceSpec.
double space_norm(const GridFunction& f, const SpaceSpec& spec, const LPBasis& basis);

/// A local Hardy space atom: supported in B(x0,r), |a| <= |B|^(-1/p),
/// with discrete moments up to degree [n(1/p-1)] projected out when r <= 1.
struct Atom {
    std::array<double, 2> x0{0.0, 0.0};
    double r = 1.0;
    double p = 1.0;
    GridFunction samples;
};

Atom make_atom(const Grid& grid, std::array<double, 2> x0, double r, double p,
               std::uint64_t seed);

/// Ball volume |B(x0,r)| in dimension n (2r in 1d, pi r^2 in 2d).
double ball_volume(int n, double r);

}  // namespace oscillab
