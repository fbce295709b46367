#pragma once

#include <functional>
#include <optional>
#include <string>

#include "oscillab/expr.hpp"
#include "oscillab/jets.hpp"

namespace oscillab {

/// Claimed class membership shipped with a phase; checkers confirm it.
struct PhaseMeta {
    double fk_order = 0.0;       // k such that phi is claimed in F^k (0 = no claim)
    double lf_mu = 0.0;          // LF(mu) order claimed (0 = no claim)
    double snd_delta = 0.0;      // claimed lower bound on |det d2phi/dxdxi|
    bool smooth_at_origin = true;
    bool schrodinger = false;    // claimed |d^a d^b phi| <= c for |a+b| >= 2
};

/// Real phase function phi(x,xi) with derivative access up to total order 4.
struct PhaseFunction {
    int n = 1;
    std::string name;
    PhaseMeta meta;

    std::function<double(std::array<double, 2>, std::array<double, 2>)> eval;
    std::function<Jet<double>(std::array<double, 2>, std::array<double, 2>)> jet4;
    /// Set when phi(x,xi) = x.xi + h(xi): enables the multiplier fast path.
    std::function<double(std::array<double, 2>)> h_xi;

    double operator()(std::array<double, 2> x, std::array<double, 2> xi) const {
        return eval(x, xi);
    }

    /// d^alpha_xi d^beta_x phi at (x, xi); |alpha| + |beta| <= 4.
    double derivative(std::array<int, 2> beta_x, std::array<int, 2> alpha_xi,
                      std::array<double, 2> x, std::array<double, 2> xi) const;

    /// Gradient in x (via the jet).
    std::array<double, 2> grad_x(std::array<double, 2> x, std::array<double, 2> xi) const;
};

/// Amplitude a(x,xi), possibly complex-valued, with derivative access and
/// claimed symbol class metadata.
struct AmplitudeMeta {
    double order_m = 0.0;
    double rho = 0.0;
    double delta_type = 0.0;
    bool x_independent = false;
    double x_support_radius = INFINITY;  // radius beyond which a vanishes
};

struct Amplitude {
    int n = 1;
    std::string name;
    AmplitudeMeta meta;

    std::function<std::complex<double>(std::array<double, 2>, std::array<double, 2>)> eval;
    std::function<Jet<std::complex<double>>(std::array<double, 2>, std::array<double, 2>)> jet4;

    std::complex<double> operator()(std::array<double, 2> x, std::array<double, 2> xi) const {
        return eval(x, xi);
    }

    std::complex<double> derivative(std::array<int, 2> beta_x, std::array<int, 2> alpha_xi,
                                    std::array<double, 2> x, std::array<double, 2> xi) const;
};

/// Preset catalog.  Phase keys: "linear", "power:k", "kg:eps", "tk:eps,k",
/// "schrodinger", "ho:t", "fujiwara1d:k", or "expr:<formula>" where the
/// formula is the whole phase phi(x,xi).
PhaseFunction parse_phase(const std::string& key, int n);

/// Amplitude keys: "one", "bessel:m", "gauss_x", "cutoff_x:X", "sxsxi:eps",
/// "miyachi:k,m", or "expr:<formula>" (real-valued).
Amplitude parse_amplitude(const std::string& key, int n);

/// a(x,xi) multiplied by a frequency cutoff w(xi) (used by frequency_split
/// and band localization); metadata inherited from a.
Amplitude amplitude_with_xi_cutoff(const Amplitude& a,
                                   std::function<double(std::array<double, 2>)> w_eval,
                                   std::function<Jet<double>(std::array<double, 2>)> w_jet,
                                   const std::string& tag);

/// Central finite-difference approximation of the same derivative, used to
/// cross-check the jet path (O(h^2) accurate on smooth regions).
double fd_phase_derivative(const PhaseFunction& phi, std::array<int, 2> beta_x,
                           std::array<int, 2> alpha_xi, std::array<double, 2> x,
                           std::array<double, 2> xi, double h);

}  // namespace oscillab
