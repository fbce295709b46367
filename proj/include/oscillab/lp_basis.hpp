#pragma once

#include <vector>

#include "oscillab/grid.hpp"

namespace oscillab {

/// Smooth transition h(t) = exp(-1/t) for t > 0, else 0.
double bump_h(double t);

/// Radial profile of the base cutoff: 1 on [0,1], 0 on [2,inf),
/// h(2-r)/(h(2-r)+h(r-1)) in between.  Smooth in r.
double psi0_radial(double r);

/// psi0(xi) evaluated at a frequency vector.
double psi0_of(std::array<double, 2> xi, int n);

/// Dyadic Littlewood-Paley partition sampled on the frequency lattice.
///
/// psi_0(xi) = psi0 profile; psi_j(xi) = psi0(2^-j xi) - psi0(2^-(j-1) xi)
/// for j >= 1; Psi_j = psi_{j-1} + psi_j + psi_{j+1} with psi_{-1} := psi_0.
class LPBasis {
  public:
    LPBasis(int j_max, const Grid& grid);

    int j_max() const { return j_max_; }
    const Grid& grid() const { return grid_; }

    /// Sampled psi_j on the lattice (bin order), j in [0, j_max].
    const std::vector<double>& psi(int j) const;
    /// Sampled Psi_j (wider cutoff equal to 1 on supp psi_j).
    const std::vector<double>& Psi(int j) const;

    /// Pointwise evaluators usable off the lattice.
    static double psi_j_at(int j, std::array<double, 2> xi, int n);

    /// CSV export (xi, value) of one band for inspection.
    void export_band_csv(int j, const std::string& path) const;

  private:
    int j_max_;
    Grid grid_;
    std::vector<std::vector<double>> psi_;
    std::vector<std::vector<double>> Psi_;
};

/// The j-th Littlewood-Paley piece psi_j(D) f.
GridFunction lp_piece(const GridFunction& f, int j, const LPBasis& basis);

/// Cover of the annulus supp psi_j by unit balls centred on the integer
/// lattice, with the normalized bumps chi_j^nu summing to 1 on supp psi_j.
class SecondDecomposition {
  public:
    SecondDecomposition(int j, const Grid& grid);

    int j() const { return j_; }
    std::size_t center_count() const { return centers_.size(); }
    std::array<double, 2> center(std::size_t nu) const { return centers_[nu]; }

    /// chi_j^nu at a frequency vector (0 outside B(center, 2)).
    double chi(std::size_t nu, std::array<double, 2> xi) const;
    /// Sum of all chi_j^nu at xi (1 on supp psi_j by construction).
    double chi_sum(std::array<double, 2> xi) const;

  private:
    double lambda_raw(std::size_t nu, std::array<double, 2> xi) const;
    int j_;
    int n_;
    std::vector<std::array<double, 2>> centers_;
};

/// Axis-direction partition lambda_1..lambda_2n with sum 1 outside B(0,R).
class DirectionalPartition {
  public:
    DirectionalPartition(double R, const Grid& grid);

    double R() const { return R_; }
    int count() const { return 2 * grid_.n; }
    /// lambda_ell at a frequency vector, ell in [0, 2n).
    double lambda(int ell, std::array<double, 2> xi) const;
    /// Sampled lambda_ell on the lattice.
    std::vector<double> sampled(int ell) const;

  private:
    double chi_axis(double t) const;  // ramp: 0 for t<=1, 1 for t>=R/sqrt(n)
    double R_;
    Grid grid_;
};

}  // namespace oscillab
