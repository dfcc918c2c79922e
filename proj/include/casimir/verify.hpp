#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Invariant suites behind `casimir verify`. Each check measures one number
// and compares it against a fixed tolerance.

namespace casimir {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

/// suite is one of "airy", "greens", "stress", "all". Throws DomainError for
/// anything else. Checks run sequentially in a fixed order.
std::vector<CheckResult> run_suite(std::string_view suite);

/// {"suite": ..., "passed": ..., "checks": [{name, status, measured, tolerance}]}
nlohmann::json suite_to_json(std::string_view suite, const std::vector<CheckResult>& checks);

// Measurements shared by the suites and the acceptance driver.
namespace measure {

/// max |pi (Ai_s Bi'_s - Ai'_s Bi_s) - 1| over z = 0 and a log grid on
/// [1e-3, 1e4] with `per_decade` points per decade.
double wronskian_deviation(int per_decade = 20);

/// max relative mismatch of the four scaled Airy values against the ODE
/// oracle on z = 0, step, ..., 10.
double airy_oracle_deviation(double step = 0.25);

/// max relative mismatch of greens_linear_above/below against the
/// finite-difference oracle over kappa in {0.3, 1, 3}, eta in {0.5, 5},
/// two sources per side and seven (above) or eight (below) field points.
double greens_oracle_deviation();

/// max |G| at the plate over a set of sources and momenta (both sides).
double greens_dirichlet_deviation();

/// max |G(x, x') - G(x', x)| / |G| over interior pairs (both sides).
double greens_symmetry_deviation();

/// max |jump + 1| of the x-derivative across the source, from Richardson-
/// extrapolated one-sided differences of the closed forms.
double greens_jump_deviation();

/// max |integrand_net(kappa, 0).net| over kappa in {0, 0.1, 1, 5, 20}.
double eta_zero_net();

/// max over both sides of |integrand - (-kappa - eta^{1/3}/(2 kappa) -+ 1/(4 kappa^2))|.
double printed_expansion_deviation(double kappa, double eta);

/// |force_classic(a) + pi/(24 a^2)| / (pi/(24 a^2)).
double classic_deviation(double a);

/// max over a K-grid of |below - above - net| / max(|net|, |first-order term|, K)
/// for the perturbative integrands.
double perturbative_identity_deviation(double a, double b);

/// Relative difference of force_exact(eta) and the finite-difference force.
double fd_force_deviation(double eta);

}  // namespace measure

}  // namespace casimir
