#pragma once

#include <string>
#include <vector>

#include "oscillab/phase.hpp"

namespace oscillab {

/// The critical amplitude order m_k(p) = -k n |1/p - 1/2| (1/inf = 0).
double critical_order(double k, int n, double p);

/// Outcome of one condition check: the measured constant, the threshold it
/// was judged against, and the advisory verdict.  Checks are sups over a
/// finite sample set and derivatives are truncated at total order 4.
struct ConditionCheck {
    std::string condition;
    double measured = 0.0;
    double threshold = 0.0;
    bool verdict = false;
    int samples_used = 0;
    int samples_skipped = 0;
    int order_truncation = JetTable::kDegree;
    std::string note;
};

struct PhaseReport {
    std::string name;
    std::string sample_description;
    std::vector<ConditionCheck> checks;

    bool all_verdicts() const {
        for (const auto& c : checks)
            if (!c.verdict) return false;
        return !checks.empty();
    }
};

/// A finite set of (x, xi) evaluation points.
struct SampleSet {
    std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>> points;
    std::string description;
};

/// x on a tensor grid in [-X,X]^n, xi on dyadic shells 2^0..2^jmax with
/// angular coverage and radial jitter, plus seeded random points (|xi|>=1).
SampleSet sample_highfreq(int n, int j_max, std::uint64_t seed = 1);

/// Low-frequency shells |xi| = 2^-l down to 2^-20, for LF(mu) checks.
SampleSet sample_lowfreq(int n, std::uint64_t seed = 2);

/// Union of both plus xi = 0 (smooth phases only).
SampleSet sample_full(int n, int j_max, bool include_origin, std::uint64_t seed = 3);

/// Sup-type verdicts default to 10x the constant measured on the
/// best-matching model preset (power:k for F^k, power:mu for LF, linear
/// for L2, power:2 for the Schrodinger class, bessel:m for S^m classes).
/// Pass an explicit threshold to override.
inline constexpr double kAutoThreshold = -1.0;

/// min |det d2_{x xi} phi| over the samples; verdict: >= delta_claimed.
ConditionCheck check_snd(const PhaseFunction& phi, const SampleSet& samples,
                         double delta_claimed);

/// F^k membership: for k >= 1 sup |d^a_xi (phi - x.xi)| / |xi|^(k-1) over
/// 1 <= |a| <= 4; for k < 1 the mixed form with weight |xi|^(k-|a|).
ConditionCheck check_fk(const PhaseFunction& phi, double k, const SampleSet& samples,
                        double threshold = kAutoThreshold);

/// L2-condition: sup |d^a_xi d^b_x phi| over |a|,|b| >= 1, on |xi| >= 1.
ConditionCheck check_l2_condition(const PhaseFunction& phi, const SampleSet& samples,
                                  double threshold = kAutoThreshold);

/// LF(mu): sup |d^a_xi d^b_x (phi - x.xi)| / |xi|^(mu-|a|) over 0 < |xi| <= 2.
/// The x-only gauge phi(x,0) is subtracted first (it never affects the
/// operator modulus), so phases like the 1d sin-cos example check cleanly.
ConditionCheck check_lf(const PhaseFunction& phi, double mu, const SampleSet& samples,
                        double threshold = kAutoThreshold);

/// Schrodinger phase: sup |d^a d^b phi| over 2 <= |a+b| <= 4.
ConditionCheck check_schrodinger_phase(const PhaseFunction& phi, const SampleSet& samples,
                                       double threshold = kAutoThreshold);

/// Amplitude class S^m_{rho,delta}: sup |d^a_xi d^b_x a| / <xi>^(m-rho|a|+delta|b|).
ConditionCheck check_amplitude_class(const Amplitude& a, double m, double rho,
                                     double delta_type, const SampleSet& samples,
                                     double threshold = kAutoThreshold);

/// Runs every check the phase's metadata claims; used by `verify-phase`.
PhaseReport verify_phase(const PhaseFunction& phi, int j_max = 6, std::uint64_t seed = 1);

}  // namespace oscillab
