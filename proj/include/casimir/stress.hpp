#pragma once

#include "casimir/quadrature.hpp"

// Coincident-limit stress integrands at the plate and the resulting force.
//
// With K = b^{1/3} kappa the xx-stress just above and just below the plate is
// (b^{2/3}/2pi) times the kappa-integral of the bracketed ratios returned by
// integrand_above/integrand_below; each integral diverges like kappa^2 on its
// own, their difference does not. The force per unit area is
//
//     T^{xx} = (hbar c / a^2) f(eta),
//     f(eta) = eta^{2/3} int_0^inf dkappa/(2 pi) [below - above].

namespace casimir {

struct StressIntegrandSample {
    double kappa = 0.0;
    double above = 0.0;  // Ai'(z2)/Ai(z2)
    double below = 0.0;  // N/D
    double net = 0.0;    // below - above, evaluated without cancellation
};

struct ForceResult {
    double eta = 0.0;
    double f_eta = 0.0;
    double err_est = 0.0;
    double kappa_max = 0.0;
    long n_evals = 0;
};

/// Ai'(z)/Ai(z) at z = kappa^2 + eta^{1/3}. Requires kappa, eta >= 0.
double integrand_above(double kappa, double eta);

/// N/D with, at z1 = kappa^2 and z2 = kappa^2 + eta^{1/3},
///     N = 2 Ai(z1) Ai'(z1) Bi'(z2) - Ai'(z2) P,
///     D = Ai(z2) P - 2 Ai(z1) Ai'(z1) Bi(z2),
///     P = Ai'(z1) Bi(z1) + Ai(z1) Bi'(z1).
/// The factor e^{zeta(z2) - 2 zeta(z1)} is removed from N and D before the
/// division. Throws SingularityError if the reduced D vanishes.
double integrand_below(double kappa, double eta);

/// Both integrands and their difference. The difference is evaluated from
///     below - above = -(ln Ai Bi)'(z2) + P e^{-2(zeta2 - zeta1)} / (pi D' Bi_s(z2)),
/// (D' the reduced denominator), which is free of the kappa-sized cancellation
/// and agrees with the literal subtraction to rounding. At eta = 0, net is
/// exactly 0 and above = below = Ai'/Ai(kappa^2).
StressIntegrandSample integrand_net(double kappa, double eta);

/// Analytic remainder int_{kappa_max}^inf dkappa/(2 pi) 1/(2(kappa^2 + eta^{1/3}))
///     = eta^{-1/6}/(4 pi) * [pi/2 - arctan(kappa_max eta^{-1/6})].
double tail_model(double kappa_max, double eta);

/// Relative mismatch |net - 1/(2(kappa^2 + eta^{1/3}))| / net at kappa.
double tail_model_mismatch(double kappa, double eta);

/// The tail model is admissible at kappa when the mismatch is below 1%.
bool tail_model_admissible(double kappa_max, double eta);

/// f(eta), with the quadrature error and the measured tail-model mismatch
/// folded into err_est. f(0) = 0 exactly. With the adaptive policy the
/// cutoff starts at 10 max(1, eta^{1/6}) and doubles until the tail model is
/// admissible and smaller than 0.1 rel_tol |integral|. Throws ToleranceError
/// if a quadrature piece does not converge, or if a fixed cutoff is not
/// admissible.
ForceResult force_exact(double eta, const QuadratureSpec& spec);

/// K (coth(Ka) - 1) = 2K / (e^{2Ka} - 1): the difference of the two free-field
/// coincident-limit terms, -K coth(Ka) between plates and -K above one plate.
double classic_integrand(double K, double a);

/// -int_0^inf dK/(2 pi) K (coth(Ka) - 1) = -pi/(24 a^2).
double force_classic(double a, const QuadratureSpec& spec);

struct PerturbativeSample {
    double below = 0.0;
    double above = 0.0;
    double net = 0.0;
};

/// First order in b:
///     below = -K + b (1 - 2Ka - 2 e^{-2Ka}) / (4K^2),
///     above = -K - b (1 + 2Ka) / (4K^2),
///     net   = b (1 - e^{-2Ka}) / (2K^2).
PerturbativeSample perturbative_integrands(double K, double a, double b);

/// b int_{k_min}^inf dK/(2 pi) (1 - e^{-2Ka}) / (2K^2). Positive and growing
/// like (a b / 2 pi) ln(1/k_min) as k_min -> 0: the first-order estimate has an
/// infrared divergence.
double force_perturbative(double a, double b, double k_min, const QuadratureSpec& spec);

}  // namespace casimir
