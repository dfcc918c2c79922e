#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir/errors.hpp"
#include "casimir/greens.hpp"
#include "casimir/oracle.hpp"
#include "casimir/stress.hpp"

using namespace casimir;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// -Bi'(1)/Bi(1), 30 digits.
constexpr double kMinusBiLogDerivAtOne = -0.77225253613597879242;

// Slope jump across the source node from second-order one-sided differences.
double nodal_jump(const BvpSolution& s) {
    std::size_t m = 0;
    while (std::abs(s.x[m] - s.source_x) > 1e-9) ++m;
    const double h = s.x[1] - s.x[0];
    const double right = (-3.0 * s.g[m] + 4.0 * s.g[m + 1] - s.g[m + 2]) / (2.0 * h);
    const double left = (3.0 * s.g[m] - 4.0 * s.g[m - 1] + s.g[m - 2]) / (2.0 * h);
    return right - left;
}

}  // namespace

TEST_CASE("GridSpec validation") {
    GridSpec g{1.0, 5.0, 1000, 4};
    CHECK_NOTHROW(g.validate());
    CHECK(g.spacing() == doctest::Approx(4.0 / 999.0));
    g.n = 999;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = GridSpec{1.0, 1.0, 2000, 4};
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = GridSpec{1.0, 5.0, 2000, 3};
    CHECK_THROWS_AS(g.validate(), DomainError);

    const PlateConfig cfg = PlateConfig::from_eta(1.0);
    CHECK_THROWS_AS(solve_bvp_above(1.0, cfg, 1.5, GridSpec{1.1, 20.0, 2000, 4}), DomainError);
    CHECK_THROWS_AS(solve_bvp_full(1.0, cfg, 0.5, GridSpec{-20.0, 0.9, 2000, 4}), DomainError);
    CHECK_THROWS_AS(solve_bvp_above(1.0, cfg, 0.5, GridSpec{1.0, 20.0, 2000, 4}), DomainError);
    CHECK_THROWS_AS(solve_bvp_full(1.0, cfg, 1.5, GridSpec{-20.0, 1.0, 2000, 4}), DomainError);
}

TEST_CASE("default grids put the plate, the origin and the source on nodes") {
    const PlateConfig cfg = PlateConfig::from_eta(1.0);
    const GridSpec above = default_bvp_grid(1.0, cfg, Side::above, 1.5);
    CHECK(above.x_lo == 1.0);
    CHECK(above.n >= 2000);
    const double ha = above.spacing();
    CHECK(std::abs(0.5 / ha - std::round(0.5 / ha)) < 1e-9);

    const GridSpec below = default_bvp_grid(1.0, cfg, Side::below, 0.25);
    CHECK(below.x_hi == 1.0);
    const double hb = below.spacing();
    CHECK(std::abs(1.0 / hb - std::round(1.0 / hb)) < 1e-9);
    CHECK(std::abs(0.75 / hb - std::round(0.75 / hb)) < 1e-9);
    CHECK(below.x_lo < -10.0);
}

TEST_CASE("boundary values and the unit jump") {
    for (double eta : {0.5, 5.0}) {
        const PlateConfig cfg = PlateConfig::from_eta(eta);
        for (double kappa : {0.0, 0.3, 1.0, 3.0}) {
            CAPTURE(eta);
            CAPTURE(kappa);
            const BvpSolution up = solve_bvp_above(kappa, cfg, 1.5, default_bvp_grid(kappa, cfg, Side::above, 1.5));
            CHECK(up.x.front() == 1.0);
            CHECK(up.g.front() == 0.0);
            CHECK(up.value_at(1.0) == 0.0);
            CHECK(std::abs(nodal_jump(up) + 1.0) < 1e-4);
            CHECK(up.richardson_gap < 1e-5);

            const BvpSolution down = solve_bvp_full(kappa, cfg, 0.25, default_bvp_grid(kappa, cfg, Side::below, 0.25));
            CHECK(down.x.back() == 1.0);
            CHECK(down.g.back() == 0.0);
            CHECK(std::abs(nodal_jump(down) + 1.0) < 1e-4);
        }
    }
}

TEST_CASE("above the plate: matches the closed form") {
    const double positions[] = {1.05, 1.2, 1.5, 1.8, 2.5, 3.5, 5.0};
    for (double eta : {0.5, 5.0}) {
        const PlateConfig cfg = PlateConfig::from_eta(eta);
        for (double kappa : {0.3, 1.0, 3.0}) {
            for (double xp : {1.25, 2.0}) {
                CAPTURE(eta);
                CAPTURE(kappa);
                CAPTURE(xp);
                const BvpSolution s = solve_bvp_above(kappa, cfg, xp, default_bvp_grid(kappa, cfg, Side::above, xp));
                CHECK(s.source_x == doctest::Approx(xp).epsilon(1e-12));
                for (double x : positions) {
                    CAPTURE(x);
                    CHECK(rel(s.value_at(x), greens_linear_above(x, xp, kappa, cfg)) < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("below the plate: matches the closed form on both sides of the origin") {
    const double positions[] = {-2.0, -1.0, -0.4, 0.0, 0.1, 0.45, 0.7, 0.95};
    for (double eta : {0.5, 5.0}) {
        const PlateConfig cfg = PlateConfig::from_eta(eta);
        for (double kappa : {0.3, 1.0, 3.0}) {
            for (double xp : {-0.5, 0.25, 0.75}) {
                CAPTURE(eta);
                CAPTURE(kappa);
                CAPTURE(xp);
                const BvpSolution s = solve_bvp_full(kappa, cfg, xp, default_bvp_grid(kappa, cfg, Side::below, xp));
                for (double x : positions) {
                    CAPTURE(x);
                    CHECK(rel(s.value_at(x), greens_linear_below(x, xp, kappa, cfg)) < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("below the plate: symmetric under exchange of source and field point") {
    const PlateConfig cfg = PlateConfig::from_eta(1.0);
    const double kappa = 0.7;
    const double pts[] = {-0.75, -0.25, 0.25, 0.5};
    std::vector<BvpSolution> sols;
    for (double xp : pts) sols.push_back(solve_bvp_full(kappa, cfg, xp, default_bvp_grid(kappa, cfg, Side::below, -0.75)));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            CHECK(rel(sols[i].value_at(pts[j]), sols[j].value_at(pts[i])) < 1e-5);
        }
    }
}

TEST_CASE("second-order stencil converges at its order") {
    const PlateConfig cfg = PlateConfig::from_eta(1.0);
    const double kappa = 1.0;
    const double xp = 0.5;
    double prev = 0.0;
    for (int n_min : {1000, 2000, 4000, 8000}) {
        const GridSpec grid = default_bvp_grid(kappa, cfg, Side::below, xp, n_min, 2);
        const BvpSolution s = detail::solve_bvp_single(kappa, cfg, Side::below, xp, grid);
        double worst = 0.0;
        for (double x : {-1.0, 0.0, 0.25, 0.5, 0.75}) worst = std::max(worst, rel(s.value_at(x), greens_linear_below(x, xp, kappa, cfg)));
        CAPTURE(n_min);
        CAPTURE(worst);
        if (prev > 1e-6) CHECK(prev / worst >= 3.0);
        prev = worst;
    }
}

TEST_CASE("a coarse grid is reported, not silently accepted") {
    const PlateConfig cfg = PlateConfig::from_eta(5.0);
    CHECK_THROWS_AS(solve_bvp_above(3.0, cfg, 1.4, GridSpec{1.0, 200.8, 1000, 2}), OracleError);
    CHECK_THROWS_AS(integrand_from_fd(1.0, cfg, Side::above, GridSpec{1.0, 20.0, 2000, 4}, 0.01), OracleError);
}

TEST_CASE("stress integrands from the finite-difference solution") {
    const PlateConfig one = PlateConfig::from_eta(1.0);
    CHECK(rel(integrand_from_fd(1.0, one, Side::above), integrand_above(1.0, 1.0)) < 1e-4);
    CHECK(rel(integrand_from_fd(0.0, one, Side::below), kMinusBiLogDerivAtOne) < 1e-4);

    for (double eta : {0.5, 1.0, 5.0}) {
        const PlateConfig cfg = PlateConfig::from_eta(eta);
        for (double kappa : {0.0, 0.3, 1.0, 3.0, 8.0}) {
            CAPTURE(eta);
            CAPTURE(kappa);
            CHECK(rel(integrand_from_fd(kappa, cfg, Side::above), integrand_above(kappa, eta)) < 1e-6);
            CHECK(rel(integrand_from_fd(kappa, cfg, Side::below), integrand_below(kappa, eta)) < 1e-6);
        }
    }

    // Explicit grid and offset.
    const GridSpec grid{1.0, 30.0, 20000, 4};
    CHECK(rel(integrand_from_fd(1.0, one, Side::above, grid, 0.02), integrand_above(1.0, 1.0)) < 1e-6);
}

TEST_CASE("free field: both sides of a single plate give the same stress") {
    const PlateConfig free = PlateConfig::from_eta(0.0);
    for (double kappa : {0.25, 1.0, 3.0}) {
        CAPTURE(kappa);
        const double up = integrand_from_fd(kappa, free, Side::above);
        const double down = integrand_from_fd(kappa, free, Side::below);
        CHECK(std::abs(up - down) < 1e-6);
        CHECK(rel(up, -kappa) < 1e-6);
    }
    CHECK(integrand_from_fd(0.0, free, Side::above) == 0.0);
}

TEST_CASE("force from the finite-difference pipeline") {
    const ForceResult fd = force_from_fd(1.0);
    const ForceResult exact = force_exact(1.0, QuadratureSpec{});
    CHECK(rel(fd.f_eta, exact.f_eta) < 1e-4);
    CHECK(fd.n_evals > 0);
    CHECK(fd.kappa_max == 8.0);
    CHECK(force_from_fd(0.0).f_eta == 0.0);
}
