#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oscillab {

/// Multi-index bookkeeping for truncated multivariate Taylor expansions of
/// total degree <= 4 in `nvars` variables (2 for 1d phases, 4 for 2d).
class JetTable {
  public:
    static constexpr int kDegree = 4;

    static const JetTable& get(int nvars);

    int nvars;
    std::vector<std::array<std::uint8_t, 4>> exps;  // exponent tuples
    std::vector<double> fact;                       // multi-index factorials

    struct Triple {
        std::uint16_t a, b, t;
    };
    std::vector<Triple> mult;  // all products with total degree <= 4

    std::size_t size() const { return exps.size(); }
    int index_of(const std::array<std::uint8_t, 4>& e) const {
        int key = e[0] + 5 * (e[1] + 5 * (e[2] + 5 * e[3]));
        int idx = lookup_[key];
        if (idx < 0) throw std::logic_error("JetTable: exponent out of range");
        return idx;
    }

  private:
    explicit JetTable(int nv);
    std::array<int, 625> lookup_;
};

/// Truncated Taylor series (a "jet") of degree 4; S is double or
/// std::complex<double>.  Coefficients are Taylor coefficients, so the
/// partial derivative for multi-index e is c[index_of(e)] * e!.
template <class S>
struct Jet {
    const JetTable* tab = nullptr;
    std::vector<S> c;

    Jet() = default;
    explicit Jet(const JetTable& t) : tab(&t), c(t.size(), S(0)) {}

    static Jet constant(const JetTable& t, S v) {
        Jet j(t);
        j.c[0] = v;
        return j;
    }
    static Jet variable(const JetTable& t, S v, int var) {
        Jet j(t);
        j.c[0] = v;
        std::array<std::uint8_t, 4> e{0, 0, 0, 0};
        e[var] = 1;
        j.c[static_cast<std::size_t>(t.index_of(e))] = S(1);
        return j;
    }

    S value() const { return c[0]; }
    S derivative(const std::array<std::uint8_t, 4>& e) const {
        int i = tab->index_of(e);
        return c[static_cast<std::size_t>(i)] * S(tab->fact[static_cast<std::size_t>(i)]);
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    Jet& operator*=(S s) {
        for (auto& v : c) v *= s;
        return *this;
    }
};

template <class S>
Jet<S> operator+(Jet<S> a, const Jet<S>& b) { return a += b; }
template <class S>
Jet<S> operator-(Jet<S> a, const Jet<S>& b) { return a -= b; }
template <class S>
Jet<S> operator-(Jet<S> a) { return a *= S(-1); }
template <class S>
Jet<S> operator*(Jet<S> a, S s) { return a *= s; }
template <class S>
Jet<S> operator*(S s, Jet<S> a) { return a *= s; }
template <class S>
Jet<S> operator+(Jet<S> a, S s) { a.c[0] += s; return a; }
template <class S>
Jet<S> operator+(S s, Jet<S> a) { a.c[0] += s; return a; }
template <class S>
Jet<S> operator-(Jet<S> a, S s) { a.c[0] -= s; return a; }
template <class S>
Jet<S> operator-(S s, Jet<S> a) { a *= S(-1); a.c[0] += s; return a; }

template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
    Jet<S> out(*a.tab);
    for (const auto& tr : a.tab->mult) out.c[tr.t] += a.c[tr.a] * b.c[tr.b];
    return out;
}

/// g(u) for a univariate g given by the derivative list g_derivs[i] = g^(i)
/// at u.value(); evaluated by Horner on the nilpotent part.
template <class S>
Jet<S> compose(const Jet<S>& u, const std::array<S, 5>& g_derivs) {
    Jet<S> w = u;
    w.c[0] = S(0);
    Jet<S> r = Jet<S>::constant(*u.tab, g_derivs[4] / S(24));
    r = r * w + S(g_derivs[3] / S(6));
    r = r * w + S(g_derivs[2] / S(2));
    r = r * w + g_derivs[1];
    r = r * w + g_derivs[0];
    return r;
}

inline Jet<double> sin(const Jet<double>& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, {s, c, -s, -c, s});
}
inline Jet<double> cos(const Jet<double>& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    return compose(u, {c, -s, -c, s, c});
}
inline Jet<double> exp(const Jet<double>& u) {
    double e = std::exp(u.value());
    return compose(u, {e, e, e, e, e});
}
inline Jet<std::complex<double>> exp(const Jet<std::complex<double>>& u) {
    std::complex<double> e = std::exp(u.value());
    return compose(u, {e, e, e, e, e});
}

template <class S>
Jet<S> recip(const Jet<S>& u) {
    S v = u.value();
    if (std::abs(v) == 0.0) throw std::domain_error("jet: division by zero");
    S v1 = S(1) / v, v2 = v1 * v1, v3 = v2 * v1, v4 = v2 * v2, v5 = v4 * v1;
    return compose(u, {v1, -v2, S(2) * v3, S(-6) * v4, S(24) * v5});
}

template <class S>
Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) { return a * recip(b); }
template <class S>
Jet<S> operator/(Jet<S> a, S s) { return a *= (S(1) / s); }
template <class S>
Jet<S> operator/(S s, const Jet<S>& b) { Jet<S> r = recip(b); return r *= s; }

/// u^e for real e.  Needs u > 0 unless e is a small non-negative integer,
/// in which case the power is formed by repeated multiplication.
inline Jet<double> pow(const Jet<double>& u, double e) {
    double er = std::round(e);
    if (er == e && er >= 0 && er <= 8) {
        int k = static_cast<int>(er);
        Jet<double> r = Jet<double>::constant(*u.tab, 1.0);
        for (int i = 0; i < k; ++i) r = r * u;
        return r;
    }
    double v = u.value();
    if (!(v > 0)) throw std::domain_error("jet: pow of non-positive base");
    std::array<double, 5> g;
    g[0] = std::pow(v, e);
    double f = e;
    for (int i = 1; i <= 4; ++i) {
        g[static_cast<std::size_t>(i)] = f * std::pow(v, e - i);
        f *= (e - i);
    }
    return compose(u, g);
}

inline Jet<double> sqrt(const Jet<double>& u) { return pow(u, 0.5); }

/// Promote a real jet into a complex one (for complex amplitudes).
inline Jet<std::complex<double>> to_complex(const Jet<double>& u) {
    Jet<std::complex<double>> out(*u.tab);
    for (std::size_t i = 0; i < u.c.size(); ++i) out.c[i] = u.c[i];
    return out;
}

/// i * u for a real jet, as a complex jet.
inline Jet<std::complex<double>> i_times(const Jet<double>& u) {
    Jet<std::complex<double>> out(*u.tab);
    for (std::size_t i = 0; i < u.c.size(); ++i)
        out.c[i] = std::complex<double>(0.0, u.c[i]);
    return out;
}

}  // namespace oscillab
