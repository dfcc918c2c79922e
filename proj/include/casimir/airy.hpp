#pragma once

// Airy functions Ai, Bi and their derivatives on the non-negative real axis.
//
// Every quantity is available in exponentially scaled form
//
//     ai_s = Ai(z) e^{+zeta},   bi_s = Bi(z) e^{-zeta},   zeta = (2/3) z^{3/2},
//
// which stays O(1) for all z >= 0. Ratios and products are always formed from
// the scaled values so that the exponentials cancel exactly; the unscaled
// fields are best-effort and may underflow (Ai) or overflow (Bi) for large z.
//
// Evaluation regimes:
//   z <  1            Maclaurin series from the closed-form values at z = 0
//   1 <= z < 10       Taylor expansion about tabulated anchor points; Ai
//                     anchors are stepped downward from the asymptotic regime,
//                     Bi anchors upward from z = 0 (both directions are the
//                     numerically stable ones)
//   z >= 10           asymptotic expansions of the scaled functions
//
// All functions are pure and thread-safe.

namespace casimir {

struct AiryValues {
    double z = 0.0;
    double ai = 0.0;
    double aip = 0.0;
    double bi = 0.0;
    double bip = 0.0;
    double zeta = 0.0;
    double ai_s = 0.0;
    double aip_s = 0.0;
    double bi_s = 0.0;
    double bip_s = 0.0;
};

/// Ai, Ai', Bi, Bi' and their scaled variants at z >= 0.
/// Throws DomainError for negative or non-finite z.
AiryValues airy_eval(double z);

/// Ai'(z)/Ai(z), from scaled values. Strictly negative.
double log_deriv_ai(double z);

/// Bi'(z)/Bi(z), from scaled values. Strictly positive.
double log_deriv_bi(double z);

/// d/dz ln[Ai(z) Bi(z)] = Ai'/Ai + Bi'/Bi.
///
/// The two log-derivatives are +-sqrt(z) to leading order and cancel down to
/// -1/(2z); for large z the sum is therefore taken from the asymptotic
/// expansion of the product Ai*Bi instead of by subtraction.
double log_deriv_ai_bi(double z);

/// zeta(z_lo + dz) - zeta(z_lo) without cancellation between two large zetas.
double zeta_difference(double z_lo, double dz);

/// Closed-form values at the origin.
namespace airy_constants {
double ai0();
double aip0();
double bi0();
double bip0();
}  // namespace airy_constants

/// Independent reference: integrates w'' = t w from t = 0 using only the
/// closed-form initial values of Bi, with an adaptive Runge-Kutta-Fehlberg 7(8)
/// integrator. Ai is recovered by reduction of order,
///
///     Ai(z) = Bi(z)/pi * int_z^inf dt / Bi(t)^2,
///
/// because forward integration of the recessive solution is unstable.
/// Valid for 0 <= z <= 50; throws DomainError outside, OracleError if the
/// integrator fails.
AiryValues airy_via_ode_oracle(double z);

namespace detail {

// Regime evaluators, exposed for overlap tests. Each returns unscaled values
// in ai/aip/bi/bip (scaled fields filled as well).
AiryValues airy_maclaurin(double z);
AiryValues airy_anchored(double z);
AiryValues airy_asymptotic(double z);

inline constexpr double kMaclaurinMax = 1.0;
inline constexpr double kAsymptoticMin = 10.0;

}  // namespace detail

}  // namespace casimir
