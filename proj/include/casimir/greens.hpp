#pragma once

// Euclidean Green's functions of
//
//     G'' - (K^2 + V(x)) G = -delta(x - x'),   V(x) = b |x|,
//
// with a Dirichlet plate at x = a > 0. All forms are the imaginary-momentum
// (k = iK) rotations of the real-k expressions; no oscillatory evaluation is
// done anywhere. In the linear potential the momentum is measured in units of
// b^{1/3}: K = b^{1/3} kappa, and the mode argument is
//
//     y(x) = kappa^2 + b^{1/3} |x| = kappa^2 + (|x|/a) eta^{1/3},   eta = b a^3.
//
// Each constructor accepts its two points in either order and evaluates the
// closed form in its canonical ordering (G is symmetric).

namespace casimir {

/// Plate height a and potential slope b (hbar = c = 1), with eta = b a^3.
class PlateConfig {
public:
    /// Throws DomainError unless a > 0 and b >= 0 (both finite).
    PlateConfig(double a, double b);

    /// Plate at height a with slope chosen so that b a^3 = eta (up to rounding
    /// in b = eta / a^3; exact for a = 1).
    static PlateConfig from_eta(double eta, double a = 1.0);

    double a() const { return a_; }
    double b() const { return b_; }
    double eta() const { return eta_; }

private:
    double a_;
    double b_;
    double eta_;
};

/// Inverse length that turns the dimensionless momentum kappa into K:
/// b^{1/3} when b > 0, 1/a for the free field (b = 0).
double momentum_scale(const PlateConfig& cfg);

/// Between two Dirichlet plates at 0 and a, for 0 <= x' <= x <= a:
///     sinh(K x') sinh(K (a - x)) / (K sinh(K a)).
double greens_free_between(double x, double xp, double K, double a);

/// Free field above a plate at a, decaying as x -> infinity, for a <= x <= x':
///     e^{-K (x' - a)} sinh(K (x - a)) / K.
double greens_free_above(double x, double xp, double K, double a);

/// Linear potential above the plate, for a <= x' <= x:
///     (pi / b^{1/3}) Ai(y_x) [Ai(y_a) Bi(y_x') - Ai(y_x') Bi(y_a)] / Ai(y_a).
/// Requires eta > 0; the eta = 0 limit is greens_free_above.
double greens_linear_above(double x, double xp, double kappa, const PlateConfig& cfg);

/// Linear potential below the plate, both points in (-inf, a]. Built from the
/// solution decaying as x -> -infinity (Ai of the |x| argument, continued
/// across x = 0 with matching value and slope) and the solution vanishing at
/// the plate, normalised by their Wronskian. Requires eta > 0.
double greens_linear_below(double x, double xp, double kappa, const PlateConfig& cfg);

}  // namespace casimir
