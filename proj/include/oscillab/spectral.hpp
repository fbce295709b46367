#pragma once

#include <functional>

#include "oscillab/grid.hpp"

namespace oscillab {

/// Forward transform: discrete approximation of
///   fhat(xi_m) = integral f(x) exp(-i x.xi_m) dx
/// as the rectangle sum with weight dx^n (exact on the periodic lattice).
/// Input must be spatial and finite; output is spectral.
GridFunction forward_transform(const GridFunction& f);

/// Inverse transform, weight dxi^n/(2pi)^n, so that
/// inverse_transform(forward_transform(f)) == f to rounding.
GridFunction inverse_transform(const GridFunction& F);

/// Quadrature L^p quasi-norm: (sum |f|^p dx^n)^(1/p); max|f| for p = inf.
/// Accepts any p in (0, inf]; rejects p <= 0. Use p = INFINITY for sup.
double lp_norm(const GridFunction& f, double p);

/// L^2 inner product <f,g> = sum f conj(g) dx^n, deterministic order.
cplx inner_product(const GridFunction& f, const GridFunction& g);

/// Applies the Fourier multiplier m(xi): inverse(m .* forward(f)).
GridFunction frequency_multiplier(const GridFunction& f,
                                  const std::function<cplx(std::array<double, 2>)>& m);

/// Same, with the symbol pre-sampled on the frequency lattice (bin order).
GridFunction frequency_multiplier(const GridFunction& f, std::span<const cplx> symbol);
GridFunction frequency_multiplier(const GridFunction& f, std::span<const double> symbol);

/// Executes the FFT plan for `in` (bin-ordered, unnormalized, FFTW sign
/// conventions: sign=-1 forward). Building block for the transforms above;
/// plans are cached per (n,N,sign) and reused thread-safely.
void fft_raw(const Grid& g, const cplx* in, cplx* out, int sign);

}  // namespace oscillab
