#pragma once

#include <functional>
#include <optional>

namespace casimir {

/// How the upper momentum cutoff of the force integral is chosen.
struct KappaMaxPolicy {
    std::optional<double> fixed_value;  // nullopt: adaptive search

    static KappaMaxPolicy adaptive() { return {}; }
    static KappaMaxPolicy fixed(double value) { return {value}; }
    bool is_adaptive() const { return !fixed_value.has_value(); }
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    KappaMaxPolicy kappa_max_policy = KappaMaxPolicy::adaptive();

    /// Throws DomainError unless rel_tol > 0, abs_tol > 0, max_subdivisions >= 1
    /// and a fixed cutoff (if any) is finite and positive.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long n_evals = 0;
    bool converged = true;
};

/// Closed-form remainder of a semi-infinite integral beyond `cutoff`.
struct AnalyticTail {
    double cutoff = 0.0;
    double value = 0.0;
    double error_bound = 0.0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod 10/21 quadrature on [lo, hi].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol*|value|) or max_subdivisions is
/// reached (converged = false, best value returned). Endpoints are never
/// evaluated. The procedure is sequential, so identical inputs give
/// bit-identical results.
QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadratureSpec& spec);

/// Integral of f over [lower, infinity).
///
/// Without a tail, the range is mapped to t in (0, 1) by
/// kappa = lower + t/(1 - t), dkappa = dt/(1 - t)^2, which requires f to decay
/// faster than kappa^{-1-delta}. With a tail, f is integrated on
/// [lower, tail.cutoff] and tail.value is added; tail.error_bound is added to
/// the error estimate.
QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                   const std::optional<AnalyticTail>& tail = std::nullopt,
                                   double lower = 0.0);

}  // namespace casimir
