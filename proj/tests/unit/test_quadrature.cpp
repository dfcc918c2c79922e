#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir;

namespace {
constexpr double kPi = std::numbers::pi;

// Classic kernel K (coth K - 1) = 2K / (e^{2K} - 1).
double classic_kernel(double k) { return 2.0 * k / std::expm1(2.0 * k); }
}  // namespace

TEST_CASE("single Kronrod panel is exact for degree 31, Gauss part for degree 19") {
    QuadratureSpec one_panel;
    one_panel.max_subdivisions = 1;
    for (int p : {0, 1, 2, 7, 18, 30}) {
        CAPTURE(p);
        const QuadResult r = integrate_finite([p](double x) { return std::pow(x, p); }, -1.0, 1.0, one_panel);
        const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(r.value - exact) < 1e-15);
    }
    // The embedded Gauss rule integrates x^18 exactly too, so the raw
    // difference, and hence the estimate, sits at the rounding floor.
    const QuadResult r18 = integrate_finite([](double x) { return std::pow(x, 18); }, -1.0, 1.0, one_panel);
    CHECK(r18.err_est < 1e-12);
}

TEST_CASE("trivial integrals") {
    const QuadratureSpec spec;
    const QuadResult cube = integrate_finite([](double k) { return k * k; }, 0.0, 1.0, spec);
    CHECK(std::abs(cube.value - 1.0 / 3.0) < 1e-12);
    CHECK(cube.converged);

    const QuadResult zero = integrate_finite([](double) { return 0.0; }, 0.0, 1.0, spec);
    CHECK(zero.value == 0.0);
    CHECK(zero.err_est == 0.0);

    const QuadResult empty = integrate_finite([](double) { return 1.0; }, 2.0, 2.0, spec);
    CHECK(empty.value == 0.0);
    CHECK(empty.n_evals == 0);
}

TEST_CASE("semi-infinite golden integrals with honest error estimates") {
    const QuadratureSpec spec;
    struct Golden {
        const char* name;
        Integrand f;
        double exact;
    };
    const Golden suite[] = {
        {"exp", [](double k) { return std::exp(-k); }, 1.0},
        {"bose", [](double k) { return k / std::expm1(2.0 * k); }, kPi * kPi / 24.0},
        {"lorentz", [](double k) { return 1.0 / (1.0 + k * k); }, kPi / 2.0},
        {"gauss", [](double k) { return std::exp(-k * k); }, std::sqrt(kPi) / 2.0},
        {"classic", classic_kernel, kPi * kPi / 12.0},
    };
    for (const auto& g : suite) {
        CAPTURE(g.name);
        const QuadResult r = integrate_semi_infinite(g.f, spec);
        CHECK(r.converged);
        const double err = std::abs(r.value - g.exact);
        CHECK(err < 1e-10);
        CHECK(err <= 10.0 * r.err_est + 1e-16);
        CHECK(r.err_est <= std::max(spec.rel_tol * std::abs(r.value), spec.abs_tol));
    }
    CHECK(std::abs(integrate_semi_infinite(suite[1].f, spec).value - 0.4112335167) < 1e-10);
}

TEST_CASE("finite piece of the classic kernel equals full integral minus analytic tail") {
    // int_10^inf 2K e^{-2nK} dK = e^{-20n} (10/n + 1/(2 n^2)), summed over n.
    double tail = 0.0;
    for (int n = 1; n <= 4; ++n) tail += std::exp(-20.0 * n) * (10.0 / n + 0.5 / (n * n));
    const QuadratureSpec spec;
    const QuadResult partial = integrate_finite(classic_kernel, 0.0, 10.0, spec);
    const QuadResult full = integrate_semi_infinite(classic_kernel, spec);
    CHECK(std::abs(partial.value - (kPi * kPi / 12.0 - tail)) < 1e-12);
    CHECK(std::abs(partial.value - (full.value - tail)) < partial.err_est + full.err_est + 1e-15);
}

TEST_CASE("analytic tail is added with its error bound") {
    const QuadratureSpec spec;
    const AnalyticTail tail{2.0, std::exp(-2.0), 1e-13};
    const QuadResult r = integrate_semi_infinite([](double k) { return std::exp(-k); }, spec, tail);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
    CHECK(r.err_est >= 1e-13);

    const QuadResult shifted =
        integrate_semi_infinite([](double k) { return std::exp(-k); }, spec, std::nullopt, 1.0);
    CHECK(std::abs(shifted.value - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("determinism: bit-identical repeated calls") {
    const QuadratureSpec spec;
    const auto f = [](double k) { return std::sin(3.0 * k) * std::exp(-k) / (1.0 + k); };
    const QuadResult a = integrate_semi_infinite(f, spec);
    const QuadResult b = integrate_semi_infinite(f, spec);
    CHECK(a.value == b.value);
    CHECK(a.err_est == b.err_est);
    CHECK(a.n_evals == b.n_evals);
}

TEST_CASE("additivity within combined error estimates") {
    const QuadratureSpec spec;
    const auto f = [](double x) { return 1.0 / std::sqrt(x + 1e-3) + std::cos(10.0 * x); };
    const QuadResult left = integrate_finite(f, 0.0, 0.4, spec);
    const QuadResult right = integrate_finite(f, 0.4, 2.0, spec);
    const QuadResult whole = integrate_finite(f, 0.0, 2.0, spec);
    CHECK(std::abs(whole.value - (left.value + right.value)) <= whole.err_est + left.err_est + right.err_est);
}

TEST_CASE("non-convergence is reported, not hidden") {
    QuadratureSpec tight;
    tight.max_subdivisions = 3;
    tight.rel_tol = 1e-14;
    const QuadResult r = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.err_est > 0.0);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("argument validation") {
    const QuadratureSpec spec;
    CHECK_THROWS_AS(integrate_finite([](double) { return 1.0; }, 1.0, 0.0, spec), DomainError);
    QuadratureSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = QuadratureSpec{};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = QuadratureSpec{};
    bad.kappa_max_policy = KappaMaxPolicy::fixed(-1.0);
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
