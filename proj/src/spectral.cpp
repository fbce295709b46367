#include "oscillab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace oscillab {

namespace {

// FFTW plans keyed by (n, N, sign). Planning is not thread-safe, execution
// via fftw_execute_dft with matching layout is.
class PlanCache {
  public:
    fftw_plan get(const Grid& g, int sign) {
        std::scoped_lock lk(mu_);
        auto key = std::make_tuple(g.n, g.N, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<cplx> buf(g.total());
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan plan = nullptr;
        if (g.n == 1)
            plan = fftw_plan_dft_1d(g.N, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        else
            plan = fftw_plan_dft_2d(g.N, g.N, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans_[key] = plan;
        return plan;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft_raw(const Grid& g, const cplx* in, cplx* out, int sign) {
    fftw_plan plan = cache().get(g, sign);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

// x_0 = (-L/2,...): the DFT indexes nodes from 0, so both transforms carry
// the boundary phase exp(-i x_0 . xi_m) and its inverse.
GridFunction forward_transform(const GridFunction& f) {
    if (f.domain != Domain::Spatial)
        throw std::invalid_argument("forward_transform: input must be spatial");
    f.require_finite("forward_transform input");

    const Grid& g = f.grid;
    GridFunction out(g, Domain::Spectral);
    fft_raw(g, f.v.data(), out.v.data(), FFTW_FORWARD);

    const double w = std::pow(g.dx(), g.n);
    const double half = g.L / 2;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto xi = g.xi_node(i);
        double ph = half * (xi[0] + xi[1]);  // -x_0.xi with x_0 = (-L/2,..)
        out.v[i] *= w * std::polar(1.0, ph);
    }
    return out;
}

GridFunction inverse_transform(const GridFunction& F) {
    if (F.domain != Domain::Spectral)
        throw std::invalid_argument("inverse_transform: input must be spectral");
    F.require_finite("inverse_transform input");

    const Grid& g = F.grid;
    GridFunction tmp(g, Domain::Spectral);
    const double half = g.L / 2;
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto xi = g.xi_node(i);
        double ph = -half * (xi[0] + xi[1]);
        tmp.v[i] = F.v[i] * std::polar(1.0, ph);
    }
    GridFunction out(g, Domain::Spatial);
    fft_raw(g, tmp.v.data(), out.v.data(), FFTW_BACKWARD);

    // dxi^n/(2pi)^n per mode; combined with the raw backward sum this is 1/L^n.
    const double w = 1.0 / std::pow(g.L, g.n);
    for (auto& z : out.v) z *= w;
    return out;
}

double lp_norm(const GridFunction& f, double p) {
    if (f.domain != Domain::Spatial)
        throw std::invalid_argument("lp_norm: input must be spatial");
    if (!(p > 0))
        throw std::invalid_argument("lp_norm: p must be in (0, inf]");

    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : f.v) m = std::max(m, std::abs(z));
        return m;
    }
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& z : f.v) acc += std::norm(z);
    } else if (p == 1.0) {
        for (const auto& z : f.v) acc += std::abs(z);
    } else if (p == 4.0) {
        for (const auto& z : f.v) {
            double n2 = std::norm(z);
            acc += n2 * n2;
        }
    } else {
        for (const auto& z : f.v) acc += std::pow(std::abs(z), p);
    }
    return std::pow(acc * std::pow(f.grid.dx(), f.grid.n), 1.0 / p);
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
    cplx acc(0.0);
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
    return acc * std::pow(f.grid.dx(), f.grid.n);
}

GridFunction frequency_multiplier(const GridFunction& f,
                                  const std::function<cplx(std::array<double, 2>)>& m) {
    GridFunction F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
        cplx mv = m(f.grid.xi_node(i));
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
            throw std::domain_error("frequency_multiplier: symbol non-finite at a lattice node");
        F.v[i] *= mv;
    }
    return inverse_transform(F);
}

GridFunction frequency_multiplier(const GridFunction& f, std::span<const cplx> symbol) {
    if (symbol.size() != f.size())
        throw std::invalid_argument("frequency_multiplier: symbol size mismatch");
    GridFunction F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
        const cplx& mv = symbol[i];
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
            throw std::domain_error("frequency_multiplier: symbol non-finite at a lattice node");
        F.v[i] *= mv;
    }
    return inverse_transform(F);
}

GridFunction frequency_multiplier(const GridFunction& f, std::span<const double> symbol) {
    if (symbol.size() != f.size())
        throw std::invalid_argument("frequency_multiplier: symbol size mismatch");
    GridFunction F = forward_transform(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (!std::isfinite(symbol[i]))
            throw std::domain_error("frequency_multiplier: symbol non-finite at a lattice node");
        F.v[i] *= symbol[i];
    }
    return inverse_transform(F);
}

}  // namespace oscillab
