#include "casimir/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

// Kronrod 21-point abscissae on [-1, 1] (non-negative half). Odd indices are
// the 10-point Gauss abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525416734, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

struct Segment {
    double lo;
    double hi;
    double value;
    double err;
};

Segment gauss_kronrod_21(const Integrand& f, double lo, double hi) {
    constexpr double epmach = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<double, 10> f_left{};
    std::array<double, 10> f_right{};

    const double f_center = f(center);
    double res_k = kWgk[10] * f_center;
    double res_g = 0.0;
    double res_abs = std::abs(res_k);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f_left[j] = f(center - dx);
        f_right[j] = f(center + dx);
        const double pair = f_left[j] + f_right[j];
        res_k += kWgk[j] * pair;
        res_abs += kWgk[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1) res_g += kWg[j / 2] * pair;
    }
    const double res_kh = 0.5 * res_k;
    double res_asc = kWgk[10] * std::abs(f_center - res_kh);
    for (int j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(f_left[j] - res_kh) + std::abs(f_right[j] - res_kh));
    }
    const double scale = std::abs(half);
    res_abs *= scale;
    res_asc *= scale;

    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * res_abs, err);

    return {lo, hi, res_k * half, err};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    if (kappa_max_policy.fixed_value &&
        (!(*kappa_max_policy.fixed_value > 0.0) || !std::isfinite(*kappa_max_policy.fixed_value))) {
        throw DomainError("QuadratureSpec: fixed kappa_max must be finite and > 0");
    }
}

QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw DomainError("integrate_finite: need finite lo <= hi");
    }
    QuadResult result;
    if (lo == hi) return result;

    std::vector<Segment> segments{gauss_kronrod_21(f, lo, hi)};
    result.n_evals = 21;

    const auto totals = [&segments] {
        double value = 0.0;
        double err = 0.0;
        for (const Segment& s : segments) {
            value += s.value;
            err += s.err;
        }
        return std::pair{value, err};
    };

    for (;;) {
        const auto [value, err] = totals();
        result.value = value;
        result.err_est = err;
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
            result.converged = true;
            break;
        }
        if (static_cast<int>(segments.size()) >= spec.max_subdivisions) {
            result.converged = false;
            break;
        }
        // First segment with the largest error; ties resolve to the leftmost.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i) {
            if (segments[i].err > segments[worst].err) worst = i;
        }
        const Segment parent = segments[worst];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (!(mid > parent.lo && mid < parent.hi)) {
            result.converged = false;
            break;
        }
        segments[worst] = gauss_kronrod_21(f, parent.lo, mid);
        segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                        gauss_kronrod_21(f, mid, parent.hi));
        result.n_evals += 42;
    }
    return result;
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                   const std::optional<AnalyticTail>& tail, double lower) {
    spec.validate();
    if (!std::isfinite(lower)) throw DomainError("integrate_semi_infinite: lower bound must be finite");
    if (tail) {
        if (!(tail->cutoff >= lower) || !std::isfinite(tail->value) || !(tail->error_bound >= 0.0)) {
            throw DomainError("integrate_semi_infinite: invalid analytic tail");
        }
        QuadResult r = integrate_finite(f, lower, tail->cutoff, spec);
        r.value += tail->value;
        r.err_est += tail->error_bound;
        return r;
    }
    const auto mapped = [&f, lower](double t) {
        const double s = 1.0 - t;
        return f(lower + t / s) / (s * s);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
}

}  // namespace casimir
