#include "casimir/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRichardsonLimit = 1e-5;
constexpr double kDecayTarget = 32.0;
constexpr int kMaxPoints = 4000000;
constexpr int kSources = 5;

// The operator on the distance d >= 0 from the plate: x = a + sigma d, with
// sigma = +1 above and -1 below.
struct Problem {
    double a = 1.0;
    double b = 0.0;
    double k2 = 0.0;
    int sigma = 1;

    Problem(double kappa, const PlateConfig& cfg, Side side)
        : a(cfg.a()), b(cfg.b()), sigma(side == Side::above ? 1 : -1) {
        const double K = momentum_scale(cfg) * kappa;
        k2 = K * K;
    }
    double x_of(double d) const { return a + sigma * d; }
    double potential(double d) const { return k2 + b * std::abs(x_of(d)); }
    // dV/dd next to the plate.
    double slope_at_plate() const { return sigma * b; }
};

// Tridiagonal system in the unknowns G_1..G_N (G_0 = 0 on the plate),
// factorized once and solved for any number of right-hand sides.
class FdSystem {
public:
    FdSystem(const Problem& p, double h, int cells, int stencil) : h_(h), cells_(cells), stencil_(stencil) {
        const int n = cells;
        lower_.assign(n, 0.0);
        diag_.assign(n, 0.0);
        upper_.assign(n, 0.0);
        potential_.assign(n + 2, 0.0);
        for (int j = 0; j <= n + 1; ++j) potential_[j] = p.potential(j * h);

        // x = 0 is a node below the plate when a/h is an integer.
        int kink = -1;
        if (p.sigma < 0 && p.b > 0.0) {
            const double ratio = p.a / h;
            const double nearest = std::round(ratio);
            if (std::abs(ratio - nearest) < 1e-6 && nearest >= 1.0 && nearest <= n) kink = static_cast<int>(nearest);
        }

        const double h2 = h * h;
        for (int j = 1; j <= n; ++j) {
            double alpha, beta, gamma;
            if (stencil == 4) {
                alpha = 1.0 - h2 * potential_[j - 1] / 12.0;
                beta = -2.0 - 10.0 * h2 * potential_[j] / 12.0;
                gamma = 1.0 - h2 * potential_[j + 1] / 12.0;
                // The slope of |x| jumps by 2 at x = 0, which the Numerov
                // weights would otherwise misrepresent at order h^3.
                if (j == kink) beta -= h2 * h * 2.0 * p.b / 12.0;
            } else {
                alpha = 1.0;
                beta = -2.0 - h2 * potential_[j];
                gamma = 1.0;
            }
            if (j == n) {
                // Ghost node from G' = -sqrt(V) G at the far end.
                alpha += gamma;
                beta -= gamma * 2.0 * h * std::sqrt(potential_[j]);
                gamma = 0.0;
            }
            lower_[j - 1] = alpha;
            diag_[j - 1] = beta;
            upper_[j - 1] = gamma;
        }
        // Thomas factorization: diag_ becomes the pivots, upper_ the scaled
        // super-diagonal.
        for (int i = 0; i < n; ++i) {
            if (i > 0) diag_[i] -= lower_[i] * upper_[i - 1];
            if (diag_[i] == 0.0 || !std::isfinite(diag_[i])) throw OracleError("finite-difference system is singular");
            upper_[i] /= diag_[i];
        }
    }

    // Nodal G_0..G_N for a unit source at node m.
    std::vector<double> solve(int m) const {
        const int n = cells_;
        std::vector<double> y(n, 0.0);
        const double v = potential_[m];
        y[m - 1] = stencil_ == 4 ? -h_ * (1.0 + h_ * h_ * v / 12.0) : -h_;
        for (int i = 0; i < n; ++i) {
            if (i > 0) y[i] -= lower_[i] * y[i - 1];
            y[i] /= diag_[i];
        }
        for (int i = n - 2; i >= 0; --i) y[i] -= upper_[i] * y[i + 1];
        std::vector<double> g(n + 1, 0.0);
        std::copy(y.begin(), y.end(), g.begin() + 1);
        return g;
    }

    double h() const { return h_; }
    int cells() const { return cells_; }

private:
    double h_;
    int cells_;
    int stencil_;
    std::vector<double> lower_, diag_, upper_, potential_;
};

// Distance from x_start, moving in direction dir, after which the WKB
// exponent int sqrt(V) dx exceeds `target`.
double decay_distance(const Problem& p, double x_start, int dir, double target) {
    const auto v = [&](double x) { return p.k2 + p.b * std::abs(x); };
    const double inner = p.b > 0.0 ? std::cbrt(1.0 / p.b) : std::numeric_limits<double>::infinity();
    double x = x_start;
    double acc = 0.0;
    double travelled = 0.0;
    for (long steps = 0; acc < target; ++steps) {
        const double vx = v(x);
        if (vx == 0.0 && p.b == 0.0) throw DomainError("oracle: V = 0 everywhere, no decaying solution");
        const double step = 0.02 * std::min(vx > 0.0 ? 1.0 / std::sqrt(vx) : inner, inner);
        const double mid = v(x + dir * 0.5 * step);
        acc += std::sqrt(mid) * step;
        x += dir * step;
        travelled += step;
        if (steps > 100000000) throw OracleError("oracle: decay length search did not terminate");
    }
    return travelled;
}

void check_plate_end(const GridSpec& grid, const PlateConfig& cfg, Side side) {
    const double plate_end = side == Side::above ? grid.x_lo : grid.x_hi;
    if (std::abs(plate_end - cfg.a()) > 1e-12 * std::max(1.0, cfg.a())) {
        throw DomainError(side == Side::above ? "oracle: grid must start at the plate (x_lo = a)"
                                              : "oracle: grid must end at the plate (x_hi = a)");
    }
}

double combine(double coarse, double fine, int order) {
    const double w = std::pow(2.0, order);
    return (w * fine - coarse) / (w - 1.0);
}

BvpSolution to_solution(const Problem& p, double h, const std::vector<double>& g, int source_node) {
    BvpSolution out;
    const int n = static_cast<int>(g.size());
    out.x.resize(n);
    out.g.resize(n);
    for (int j = 0; j < n; ++j) {
        const int k = p.sigma > 0 ? j : n - 1 - j;
        out.x[k] = p.x_of(j * h);
        out.g[k] = g[j];
    }
    out.source_x = p.x_of(source_node * h);
    return out;
}

int source_node(const Problem& p, double xp, double h, int cells) {
    const double d = p.sigma * (xp - p.a);
    const long m = std::lround(d / h);
    if (!(d > 0.0) || m < 1 || m > cells - 1) throw DomainError("oracle: source must lie strictly inside the grid");
    return static_cast<int>(m);
}

BvpSolution solve_refined(double kappa, const PlateConfig& cfg, Side side, double xp, const GridSpec& grid) {
    grid.validate();
    check_plate_end(grid, cfg, side);
    const Problem p(kappa, cfg, side);
    const double h = grid.spacing();
    const int cells = grid.n - 1;
    const int m = source_node(p, xp, h, cells);

    const std::vector<double> coarse = FdSystem(p, h, cells, grid.stencil).solve(m);
    const std::vector<double> fine = FdSystem(p, 0.5 * h, 2 * cells, grid.stencil).solve(2 * m);

    std::vector<double> merged(coarse.size());
    double gap = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        merged[j] = combine(coarse[j], fine[2 * j], grid.stencil);
        gap = std::max(gap, std::abs(fine[2 * j] - coarse[j]));
        scale = std::max(scale, std::abs(merged[j]));
    }
    BvpSolution out = to_solution(p, h, merged, m);
    out.richardson_gap = scale > 0.0 ? gap / scale : 0.0;
    if (out.richardson_gap > kRichardsonLimit) {
        std::ostringstream msg;
        msg << "oracle: grid too coarse (n=" << grid.n << ", relative change under refinement "
            << out.richardson_gap << ")";
        throw OracleError(msg.str());
    }
    return out;
}

// Boundary slope G'(0) from the first interior node, using G(0) = 0,
// G''(0) = 0 and the first terms of the Taylor series of V G.
double boundary_slope(const Problem& p, const std::vector<double>& g, double h) {
    const double v0 = p.potential(0.0);
    return g[1] / (h * (1.0 + h * h * v0 / 6.0 + h * h * h * p.slope_at_plate() / 12.0));
}

// p'(0) for the polynomial through (t_i, y_i).
double lagrange_slope_at_zero(const std::vector<double>& t, const std::vector<double>& y) {
    double slope = 0.0;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        double weight;
        if (t[i] == 0.0) {
            weight = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) weight -= 1.0 / t[j];
            }
        } else {
            double num = 1.0;
            double den = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                den *= t[i] - t[j];
                if (t[j] != 0.0) num *= -t[j];
            }
            weight = num / den;
        }
        slope += weight * y[i];
    }
    return slope;
}

}  // namespace

void GridSpec::validate() const {
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo < x_hi)) {
        throw DomainError("GridSpec: need finite x_lo < x_hi");
    }
    if (n < 1000) throw DomainError("GridSpec: n must be >= 1000");
    if (n > kMaxPoints) throw DomainError("GridSpec: n is too large");
    if (stencil != 2 && stencil != 4) throw DomainError("GridSpec: stencil must be 2 or 4");
}

double BvpSolution::value_at(double xq) const {
    const std::size_t n = x.size();
    if (n < 4 || !(xq >= x.front() && xq <= x.back())) throw DomainError("BvpSolution: point outside the grid");
    const std::size_t i = std::min<std::size_t>(
        n - 2, static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1);
    const double h = x[1] - x[0];
    for (std::size_t k : {i, i + 1}) {
        if (std::abs(x[k] - xq) <= 1e-12 * h) return g[k];
    }
    // Nodes where G or its low derivatives are not smooth.
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    for (double barrier : {source_x, 0.0}) {
        if (!(barrier > x.front() && barrier < x.back())) continue;
        const auto b = static_cast<std::size_t>(std::lround((barrier - x.front()) / h));
        if (std::abs(x[b] - barrier) > 1e-6 * h) continue;
        if (b <= i) lo = std::max(lo, b);
        else hi = std::min(hi, b);
    }
    if (hi - lo < 3) throw DomainError("BvpSolution: not enough smooth nodes to interpolate");
    const std::size_t start = std::clamp<std::size_t>(i > 0 ? i - 1 : 0, lo, hi - 3);
    double sum = 0.0;
    for (std::size_t k = start; k < start + 4; ++k) {
        double w = 1.0;
        for (std::size_t j = start; j < start + 4; ++j) {
            if (j != k) w *= (xq - x[j]) / (x[k] - x[j]);
        }
        sum += w * g[k];
    }
    return sum;
}

GridSpec default_bvp_grid(double kappa, const PlateConfig& cfg, Side side, double xp, int n_min, int stencil) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("default_bvp_grid: kappa must be >= 0");
    if (n_min < 1000) throw DomainError("default_bvp_grid: n_min must be >= 1000");
    const Problem p(kappa, cfg, side);
    const double a = cfg.a();
    const double dp = p.sigma * (xp - a);
    if (!(dp > 0.0) || !std::isfinite(dp)) throw DomainError("default_bvp_grid: source must lie off the plate, on its side");

    const double length = dp + decay_distance(p, xp, p.sigma, kDecayTarget);
    const double h0 = length / (n_min - 1);
    double h;
    if (side == Side::above) {
        h = dp / std::ceil(dp / h0);
    } else {
        // Smallest q with q (a - x')/a an integer, so that a/h a multiple of q
        // puts both x = 0 and x' on nodes.
        const double ratio = dp / a;
        long q = 1;
        for (long c = 1; c <= 1000; ++c) {
            if (std::abs(c * ratio - std::round(c * ratio)) < 1e-9 * c) {
                q = c;
                break;
            }
        }
        h = a / (q * std::ceil(a / (q * h0)));
    }
    const double cells = std::ceil(length / h);
    if (cells + 1 > kMaxPoints) throw OracleError("default_bvp_grid: grid would be too large");
    GridSpec grid;
    grid.n = static_cast<int>(cells) + 1;
    grid.stencil = stencil;
    if (side == Side::above) {
        grid.x_lo = a;
        grid.x_hi = a + cells * h;
    } else {
        grid.x_lo = a - cells * h;
        grid.x_hi = a;
    }
    return grid;
}

BvpSolution solve_bvp_above(double kappa, const PlateConfig& cfg, double xp, const GridSpec& grid) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("solve_bvp_above: kappa must be >= 0");
    if (!(xp > cfg.a())) throw DomainError("solve_bvp_above: source must lie above the plate");
    return solve_refined(kappa, cfg, Side::above, xp, grid);
}

BvpSolution solve_bvp_full(double kappa, const PlateConfig& cfg, double xp, const GridSpec& grid) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("solve_bvp_full: kappa must be >= 0");
    if (!(xp < cfg.a())) throw DomainError("solve_bvp_full: source must lie below the plate");
    return solve_refined(kappa, cfg, Side::below, xp, grid);
}

namespace detail {

BvpSolution solve_bvp_single(double kappa, const PlateConfig& cfg, Side side, double xp, const GridSpec& grid) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("solve_bvp_single: kappa must be >= 0");
    grid.validate();
    check_plate_end(grid, cfg, side);
    const Problem p(kappa, cfg, side);
    const double h = grid.spacing();
    const int cells = grid.n - 1;
    const int m = source_node(p, xp, h, cells);
    return to_solution(p, h, FdSystem(p, h, cells, grid.stencil).solve(m), m);
}

}  // namespace detail

double integrand_from_fd(double kappa, const PlateConfig& cfg, Side side, const GridSpec& grid, double eps) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("integrand_from_fd: kappa must be >= 0");
    if (!std::isfinite(eps) || !(eps > 0.0)) throw DomainError("integrand_from_fd: eps must be > 0");
    grid.validate();
    check_plate_end(grid, cfg, side);
    const Problem p(kappa, cfg, side);
    const double h = grid.spacing();
    const int cells = grid.n - 1;
    if (eps < 4.0 * h * (1.0 - 1e-9)) {
        std::ostringstream msg;
        msg << "integrand_from_fd: insufficient resolution, eps=" << eps << " spans fewer than 4 cells of " << h;
        throw OracleError(msg.str());
    }

    std::array<int, kSources> nodes{};
    for (int k = 0; k < kSources; ++k) {
        nodes[k] = static_cast<int>(std::lround((k + 1) * eps / h));
        if (nodes[k] > cells - 2) throw OracleError("integrand_from_fd: grid too short for the source offsets");
    }

    const FdSystem coarse(p, h, cells, grid.stencil);
    const FdSystem fine(p, 0.5 * h, 2 * cells, grid.stencil);
    std::vector<double> t{0.0};
    std::vector<double> y{1.0};  // G_x(0+, x') -> 1 as x' -> plate: the unit jump
    for (int m : nodes) {
        const double gc = boundary_slope(p, coarse.solve(m), h);
        const double gf = boundary_slope(p, fine.solve(2 * m), 0.5 * h);
        const double g = combine(gc, gf, grid.stencil);
        if (std::abs(gf - gc) > kRichardsonLimit * std::abs(g)) {
            std::ostringstream msg;
            msg << "integrand_from_fd: insufficient resolution (relative change under refinement "
                << std::abs(gf - gc) / std::abs(g) << ")";
            throw OracleError(msg.str());
        }
        t.push_back(m * h);
        y.push_back(g);
    }
    return lagrange_slope_at_zero(t, y) / momentum_scale(cfg);
}

double integrand_from_fd(double kappa, const PlateConfig& cfg, Side side) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError("integrand_from_fd: kappa must be >= 0");
    const Problem p(kappa, cfg, side);
    const double v0 = p.potential(0.0);
    // Without a potential or a momentum nothing decays; the stress term K is 0.
    if (v0 == 0.0) return 0.0;
    double scale = 1.0 / std::sqrt(v0);
    if (cfg.b() > 0.0) scale = std::min(scale, std::cbrt(1.0 / cfg.b()));
    const double eps = 0.04 * scale;
    const double reach = kSources * eps;
    const double length = reach + decay_distance(p, p.x_of(reach), p.sigma, kDecayTarget);

    double h = std::min(0.25 * eps, length / 999.0);
    if (side == Side::below) h = cfg.a() / std::ceil(cfg.a() / h);
    const double cells = std::ceil(length / h);
    if (cells + 1 > kMaxPoints) throw OracleError("integrand_from_fd: grid would be too large");

    GridSpec grid;
    grid.n = static_cast<int>(cells) + 1;
    grid.stencil = 4;
    if (side == Side::above) {
        grid.x_lo = cfg.a();
        grid.x_hi = cfg.a() + cells * h;
    } else {
        grid.x_lo = cfg.a() - cells * h;
        grid.x_hi = cfg.a();
    }
    return integrand_from_fd(kappa, cfg, side, grid, eps);
}

ForceResult force_from_fd(double eta, double kappa_cut, double rel_tol) {
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError("force_from_fd: eta must be >= 0");
    if (!std::isfinite(kappa_cut) || !(kappa_cut > 0.0)) throw DomainError("force_from_fd: kappa_cut must be > 0");
    ForceResult result;
    result.eta = eta;
    if (eta == 0.0) return result;
    const PlateConfig cfg = PlateConfig::from_eta(eta);
    QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-13;
    spec.kappa_max_policy = KappaMaxPolicy::fixed(kappa_cut);
    const QuadResult q = integrate_finite(
        [&cfg](double kappa) {
            return (integrand_from_fd(kappa, cfg, Side::below) - integrand_from_fd(kappa, cfg, Side::above)) /
                   (2.0 * kPi);
        },
        0.0, kappa_cut, spec);
    if (!q.converged) {
        std::ostringstream msg;
        msg << "force_from_fd: quadrature did not converge (err_est " << q.err_est << ")";
        throw ToleranceError(msg.str());
    }
    const double scale = std::pow(eta, 2.0 / 3.0);
    result.f_eta = scale * (q.value + tail_model(kappa_cut, eta));
    result.err_est = scale * q.err_est;
    result.kappa_max = kappa_cut;
    result.n_evals = q.n_evals;
    return result;
}

}  // namespace casimir
