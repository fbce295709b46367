#include "oscillab/lp_basis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "oscillab/spectral.hpp"

namespace oscillab {

double bump_h(double t) {
    // exp(-1/t) underflows anyway below ~1/700; cut early to keep 1/t finite.
    if (t <= 1e-4) return 0.0;
    return std::exp(-1.0 / t);
}

double psi0_radial(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double a = bump_h(2.0 - r);
    double b = bump_h(r - 1.0);
    return a / (a + b);
}

static double norm2(std::array<double, 2> v, int n) {
    return (n == 1) ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

double psi0_of(std::array<double, 2> xi, int n) { return psi0_radial(norm2(xi, n)); }

double LPBasis::psi_j_at(int j, std::array<double, 2> xi, int n) {
    double r = norm2(xi, n);
    if (j == 0) return psi0_radial(r);
    return psi0_radial(std::ldexp(r, -j)) - psi0_radial(std::ldexp(r, -(j - 1)));
}

LPBasis::LPBasis(int j_max, const Grid& grid) : j_max_(j_max), grid_(grid) {
    if (j_max < 0) throw std::invalid_argument("LPBasis: j_max must be >= 0");
    if (std::ldexp(1.0, j_max + 1) > grid.xi_max_axis())
        throw std::invalid_argument("LPBasis: 2^(j_max+1) exceeds the lattice frequency range");

    const std::size_t T = grid.total();
    psi_.assign(j_max + 1, std::vector<double>(T, 0.0));
    for (std::size_t i = 0; i < T; ++i) {
        auto xi = grid.xi_node(i);
        for (int j = 0; j <= j_max; ++j) psi_[j][i] = psi_j_at(j, xi, grid.n);
    }
    // Psi_j = psi_{j-1} + psi_j + psi_{j+1}; the j = 0 case drops the lower
    // neighbour so that Psi_0 = 1 (not 2) holds on supp psi_0.
    Psi_.assign(j_max + 1, std::vector<double>(T, 0.0));
    for (int j = 0; j <= j_max; ++j) {
        for (std::size_t i = 0; i < T; ++i) {
            double lo = (j == 0) ? 0.0 : psi_[j - 1][i];
            double hi = (j + 1 <= j_max) ? psi_[j + 1][i]
                                         : psi_j_at(j + 1, grid.xi_node(i), grid.n);
            Psi_[j][i] = lo + psi_[j][i] + hi;
        }
    }
}

const std::vector<double>& LPBasis::psi(int j) const {
    if (j < 0 || j > j_max_) throw std::out_of_range("LPBasis::psi: band index out of range");
    return psi_[j];
}

const std::vector<double>& LPBasis::Psi(int j) const {
    if (j < 0 || j > j_max_) throw std::out_of_range("LPBasis::Psi: band index out of range");
    return Psi_[j];
}

void LPBasis::export_band_csv(int j, const std::string& path) const {
    const auto& band = psi(j);
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    if (grid_.n == 1)
        std::fprintf(fp, "xi,psi\n");
    else
        std::fprintf(fp, "xi1,xi2,psi\n");
    for (std::size_t i = 0; i < band.size(); ++i) {
        auto xi = grid_.xi_node(i);
        if (grid_.n == 1)
            std::fprintf(fp, "%.17g,%.17g\n", xi[0], band[i]);
        else
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", xi[0], xi[1], band[i]);
    }
    std::fclose(fp);
}

GridFunction lp_piece(const GridFunction& f, int j, const LPBasis& basis) {
    if (!(f.grid == basis.grid())) throw std::invalid_argument("lp_piece: grid mismatch");
    return frequency_multiplier(f, std::span<const double>(basis.psi(j)));
}

SecondDecomposition::SecondDecomposition(int j, const Grid& grid) : j_(j), n_(grid.n) {
    if (j < 0) throw std::invalid_argument("SecondDecomposition: j must be >= 0");
    double hi = std::ldexp(1.0, j + 1) + 1.0;
    double lo = (j == 0) ? 0.0 : std::ldexp(1.0, j - 1) - 1.0;
    if (hi > grid.xi_max_axis())
        throw std::invalid_argument("SecondDecomposition: annulus exceeds the lattice range");

    int reach = static_cast<int>(std::ceil(hi));
    if (n_ == 1) {
        for (int c = -reach; c <= reach; ++c) {
            double r = std::abs(static_cast<double>(c));
            if (r >= lo && r <= hi) centers_.push_back({static_cast<double>(c), 0.0});
        }
    } else {
        for (int c1 = -reach; c1 <= reach; ++c1)
            for (int c2 = -reach; c2 <= reach; ++c2) {
                double r = std::hypot(static_cast<double>(c1), static_cast<double>(c2));
                if (r >= lo && r <= hi)
                    centers_.push_back({static_cast<double>(c1), static_cast<double>(c2)});
            }
    }
}

double SecondDecomposition::lambda_raw(std::size_t nu, std::array<double, 2> xi) const {
    const auto& c = centers_[nu];
    double d = (n_ == 1) ? std::abs(xi[0] - c[0]) : std::hypot(xi[0] - c[0], xi[1] - c[1]);
    return psi0_radial(d);  // same u-profile: 1 on B(0,1), support in B(0,2)
}

double SecondDecomposition::chi_sum(std::array<double, 2> xi) const {
    double den = 0.0;
    for (std::size_t nu = 0; nu < centers_.size(); ++nu) den += lambda_raw(nu, xi);
    if (den <= 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t nu = 0; nu < centers_.size(); ++nu) s += lambda_raw(nu, xi) / den;
    return s;
}

double SecondDecomposition::chi(std::size_t nu, std::array<double, 2> xi) const {
    double num = lambda_raw(nu, xi);
    if (num == 0.0) return 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < centers_.size(); ++k) den += lambda_raw(k, xi);
    return num / den;
}

DirectionalPartition::DirectionalPartition(double R, const Grid& grid) : R_(R), grid_(grid) {
    if (!(R > 1.0)) throw std::invalid_argument("DirectionalPartition: R must be > 1");
}

double DirectionalPartition::chi_axis(double t) const {
    double top = R_ / std::sqrt(static_cast<double>(grid_.n));
    if (t <= 1.0) return 0.0;
    if (t >= top) return 1.0;
    double s = (t - 1.0) / (top - 1.0);
    double a = bump_h(s);
    double b = bump_h(1.0 - s);
    return a / (a + b);
}

double DirectionalPartition::lambda(int ell, std::array<double, 2> xi) const {
    const int n = grid_.n;
    if (ell < 0 || ell >= 2 * n) throw std::out_of_range("DirectionalPartition::lambda");
    double chis[4] = {0, 0, 0, 0};
    double sum = 0.0;
    for (int g = 0; g < n; ++g) {
        chis[2 * g] = chi_axis(xi[g]);
        chis[2 * g + 1] = chi_axis(-xi[g]);
        sum += chis[2 * g] + chis[2 * g + 1];
    }
    if (sum == 0.0) return 0.0;
    return chis[ell] / sum;
}

std::vector<double> DirectionalPartition::sampled(int ell) const {
    std::vector<double> out(grid_.total());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda(ell, grid_.xi_node(i));
    return out;
}

}  // namespace oscillab
