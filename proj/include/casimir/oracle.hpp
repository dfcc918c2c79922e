#pragma once

#include <vector>

#include "casimir/greens.hpp"
#include "casimir/stress.hpp"

// Finite-difference reference for the Green's functions and stress integrands.
//
// Solves G'' - (K^2 + b|x|) G = -delta(x - x') directly in x on a truncated
// uniform grid, with G = 0 on the plate and the decay closure
// G' = -sqrt(V) G at the far end(s). Nothing here evaluates an Airy function.

namespace casimir {

enum class Side { above, below };

/// Uniform grid on [x_lo, x_hi] with n points. stencil = 4 selects the
/// Numerov discretization (with corrections for the source node and the kink
/// of |x| at x = 0 when that is a node); stencil = 2 the plain three-point one.
struct GridSpec {
    double x_lo = 0.0;
    double x_hi = 1.0;
    int n = 2001;
    int stencil = 4;

    double spacing() const { return (x_hi - x_lo) / (n - 1); }
    /// Throws DomainError unless x_lo < x_hi, n >= 1000 and stencil is 2 or 4.
    void validate() const;
};

/// Nodal values of G(x, x') for one source.
struct BvpSolution {
    std::vector<double> x;
    std::vector<double> g;
    double source_x = 0.0;          // source snapped to the nearest node
    double richardson_gap = 0.0;    // max |G_2n - G_n| / max |G| on shared nodes

    /// Cubic interpolation that never mixes nodes from both sides of the
    /// source or of x = 0. Throws DomainError outside the grid.
    double value_at(double x) const;
};

/// A grid for solve_bvp_above (side = above, covering [a, X_far]) or
/// solve_bvp_full (side = below, covering [-X_far, a]) with spacing chosen so
/// that the plate, x = 0 (below) and x' are nodes when x'/a permits, at least
/// n_min points, and X_far beyond 32 decay lengths of the source.
GridSpec default_bvp_grid(double kappa, const PlateConfig& cfg, Side side, double xp, int n_min = 2000,
                          int stencil = 4);

/// G(x, x') above the plate, Richardson-combined from the grid and its
/// nested refinement (2n - 1 points). Throws OracleError ("grid too coarse")
/// if the two disagree by more than 1e-5 relative.
BvpSolution solve_bvp_above(double kappa, const PlateConfig& cfg, double xp, const GridSpec& grid);

/// G(x, x') on (-inf, a], including the kink of the potential at x = 0.
BvpSolution solve_bvp_full(double kappa, const PlateConfig& cfg, double xp, const GridSpec& grid);

/// d_x d_x' G at the plate, divided by the momentum scale so that it is
/// directly comparable with integrand_above/integrand_below. Built from the
/// boundary slope g(d) of G for sources at d = k eps (k = 1..5) from the plate,
/// Richardson-combined in the grid spacing, and differentiated at d = 0 with
/// the exact value g(0+) = 1 fixed by the unit jump. The grid must have the
/// plate at one end; eps must span at least four cells (OracleError
/// otherwise).
double integrand_from_fd(double kappa, const PlateConfig& cfg, Side side, const GridSpec& grid, double eps);

/// As above with eps = 0.04 of the local decay length at the plate and a
/// grid of spacing eps/4.
double integrand_from_fd(double kappa, const PlateConfig& cfg, Side side);

/// f(eta) from the finite-difference integrands: the net integrand is
/// integrated on [0, kappa_cut] and the analytic tail model is added beyond.
/// err_est is the quadrature estimate only.
ForceResult force_from_fd(double eta, double kappa_cut = 8.0, double rel_tol = 1e-8);

namespace detail {
/// One solve on exactly the given grid, no refinement (richardson_gap = 0).
BvpSolution solve_bvp_single(double kappa, const PlateConfig& cfg, Side side, double xp, const GridSpec& grid);
}  // namespace detail

}  // namespace casimir
