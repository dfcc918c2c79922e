#include "casimir/airy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kEps = 1e-17;

void check_argument(double z, const char* who) {
    if (!std::isfinite(z) || z < 0.0) {
        throw DomainError(std::string(who) + ": argument must be finite and >= 0, got " +
                          std::to_string(z));
    }
}

double zeta_of(double z) { return 2.0 / 3.0 * z * std::sqrt(z); }

struct Solution {
    double w;
    double wp;
};

// Taylor expansion of a solution of w'' = t w about t = z0, evaluated at z0 + h.
// Coefficients obey c_{n+2} = (z0 c_n + c_{n-1}) / ((n+2)(n+1)).
Solution taylor_step(double z0, Solution at_z0, double h) {
    if (h == 0.0) return at_z0;
    double c_prev = 0.0;  // c_{n-1}
    double c_n = at_z0.w;
    double c_next = at_z0.wp;  // c_{n+1}
    double value = c_n + c_next * h;
    double deriv = c_next;
    double h_pow = h;  // h^{n+1}
    int quiet = 0;
    for (int n = 0; n < 400; ++n) {
        const double c_new = (z0 * c_n + c_prev) / ((n + 2.0) * (n + 1.0));
        const double d_term = (n + 2.0) * c_new * h_pow;
        h_pow *= h;
        const double v_term = c_new * h_pow;
        value += v_term;
        deriv += d_term;
        c_prev = c_n;
        c_n = c_next;
        c_next = c_new;
        if (std::abs(v_term) <= kEps * std::abs(value) && std::abs(d_term) <= kEps * std::abs(deriv)) {
            // c_2 vanishes at z0 = 0, so one small term is not enough.
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return {value, deriv};
}

// Asymptotic coefficients u_k, v_k and the coefficients of the product
// expansions Ai*Bi ~ sum c_n zeta^-n and (Ai*Bi)' ~ sum e_n zeta^-n.
struct AsymptoticTables {
    static constexpr int kTerms = 64;
    std::array<double, kTerms> u{};
    std::array<double, kTerms> v{};
    std::array<double, kTerms> c{};
    std::array<double, kTerms> e{};

    AsymptoticTables() {
        u[0] = 1.0;
        v[0] = 1.0;
        for (int k = 1; k < kTerms; ++k) {
            u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
                   ((2.0 * k - 1.0) * 216.0 * k);
            v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
        }
        for (int n = 0; n < kTerms; ++n) {
            double cn = 0.0;
            double en = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                cn += sign * u[j] * u[n - j];
                en += sign * (u[j] * v[n - j] - v[j] * u[n - j]);
            }
            c[n] = cn;
            e[n] = en;
        }
    }
};

const AsymptoticTables& tables() {
    static const AsymptoticTables t;
    return t;
}

// Anchor values for the intermediate regime.
struct AnchorTable {
    static constexpr double kSpacing = 0.5;
    static constexpr int kCount = 25;  // z = 0, 0.5, ..., 12
    std::array<Solution, kCount> ai{};
    std::array<Solution, kCount> bi{};

    AnchorTable() {
        const int top = kCount - 1;
        const AiryValues start = detail::airy_asymptotic(top * kSpacing);
        ai[top] = {start.ai, start.aip};
        for (int j = top; j > 0; --j) {
            ai[j - 1] = taylor_step(j * kSpacing, ai[j], -kSpacing);
        }
        bi[0] = {airy_constants::bi0(), airy_constants::bip0()};
        for (int j = 0; j < top; ++j) {
            bi[j + 1] = taylor_step(j * kSpacing, bi[j], kSpacing);
        }
    }
};

const AnchorTable& anchors() {
    static const AnchorTable t;
    return t;
}

void fill_scaled_from_unscaled(AiryValues& v) {
    v.zeta = zeta_of(v.z);
    const double up = std::exp(v.zeta);
    const double down = std::exp(-v.zeta);
    v.ai_s = v.ai * up;
    v.aip_s = v.aip * up;
    v.bi_s = v.bi * down;
    v.bip_s = v.bip * down;
}

}  // namespace

namespace airy_constants {
// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3),
// Bi(0) = sqrt(3) Ai(0), Bi'(0) = -sqrt(3) Ai'(0).
double ai0() { return 0.35502805388781723926; }
double aip0() { return -0.25881940379280679840; }
double bi0() { return 0.61492662744600073515; }
double bip0() { return 0.44828835735382635791; }
}  // namespace airy_constants

namespace detail {

AiryValues airy_maclaurin(double z) {
    check_argument(z, "airy_maclaurin");
    const Solution a = taylor_step(0.0, {airy_constants::ai0(), airy_constants::aip0()}, z);
    const Solution b = taylor_step(0.0, {airy_constants::bi0(), airy_constants::bip0()}, z);
    AiryValues v;
    v.z = z;
    v.ai = a.w;
    v.aip = a.wp;
    v.bi = b.w;
    v.bip = b.wp;
    fill_scaled_from_unscaled(v);
    return v;
}

AiryValues airy_anchored(double z) {
    check_argument(z, "airy_anchored");
    const AnchorTable& t = anchors();
    const double top = (AnchorTable::kCount - 1) * AnchorTable::kSpacing;
    if (z > top) throw DomainError("airy_anchored: argument beyond anchor table");
    const int j = static_cast<int>(std::lround(z / AnchorTable::kSpacing));
    const double z0 = j * AnchorTable::kSpacing;
    const Solution a = taylor_step(z0, t.ai[j], z - z0);
    const Solution b = taylor_step(z0, t.bi[j], z - z0);
    AiryValues v;
    v.z = z;
    v.ai = a.w;
    v.aip = a.wp;
    v.bi = b.w;
    v.bip = b.wp;
    fill_scaled_from_unscaled(v);
    return v;
}

AiryValues airy_asymptotic(double z) {
    check_argument(z, "airy_asymptotic");
    if (z < 4.0) throw DomainError("airy_asymptotic: argument too small for the expansion");
    const AsymptoticTables& t = tables();
    const double zeta = zeta_of(z);
    const double inv = 1.0 / zeta;

    double sum_u = 1.0, sum_u_alt = 1.0, sum_v = 1.0, sum_v_alt = 1.0;
    double p = 1.0;
    double last = 1.0;
    for (int k = 1; k < AsymptoticTables::kTerms; ++k) {
        p *= inv;
        const double tu = t.u[k] * p;
        const double tv = t.v[k] * p;
        const double size = std::max(std::abs(tu), std::abs(tv));
        if (size > last) break;  // divergent tail: stop at the smallest term
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum_u += tu;
        sum_u_alt += sign * tu;
        sum_v += tv;
        sum_v_alt += sign * tv;
        last = size;
        if (size < kEps) break;
    }

    const double q = std::sqrt(std::sqrt(z));  // z^{1/4}
    AiryValues v;
    v.z = z;
    v.zeta = zeta;
    v.ai_s = sum_u_alt / (2.0 * kSqrtPi * q);
    v.aip_s = -q * sum_v_alt / (2.0 * kSqrtPi);
    v.bi_s = sum_u / (kSqrtPi * q);
    v.bip_s = q * sum_v / kSqrtPi;
    const double down = std::exp(-zeta);
    const double up = std::exp(zeta);
    v.ai = v.ai_s * down;
    v.aip = v.aip_s * down;
    v.bi = v.bi_s * up;
    v.bip = v.bip_s * up;
    return v;
}

}  // namespace detail

AiryValues airy_eval(double z) {
    check_argument(z, "airy_eval");
    if (z == 0.0) {
        AiryValues v;
        v.ai = v.ai_s = airy_constants::ai0();
        v.aip = v.aip_s = airy_constants::aip0();
        v.bi = v.bi_s = airy_constants::bi0();
        v.bip = v.bip_s = airy_constants::bip0();
        return v;
    }
    if (z < detail::kMaclaurinMax) return detail::airy_maclaurin(z);
    if (z < detail::kAsymptoticMin) return detail::airy_anchored(z);
    return detail::airy_asymptotic(z);
}

double log_deriv_ai(double z) {
    check_argument(z, "log_deriv_ai");
    const AiryValues v = airy_eval(z);
    return v.aip_s / v.ai_s;
}

double log_deriv_bi(double z) {
    check_argument(z, "log_deriv_bi");
    const AiryValues v = airy_eval(z);
    return v.bip_s / v.bi_s;
}

double log_deriv_ai_bi(double z) {
    check_argument(z, "log_deriv_ai_bi");
    if (z < detail::kAsymptoticMin) {
        const AiryValues v = airy_eval(z);
        return (v.aip_s * v.bi_s + v.ai_s * v.bip_s) / (v.ai_s * v.bi_s);
    }
    // Only even powers survive in Ai*Bi and only odd ones in its derivative.
    const AsymptoticTables& t = tables();
    const double inv = 1.0 / zeta_of(z);
    double num = 0.0;
    double den = 1.0;
    double p = 1.0;
    double last_num = HUGE_VAL;
    double last_den = HUGE_VAL;
    bool num_done = false;
    bool den_done = false;
    for (int n = 1; n < AsymptoticTables::kTerms && !(num_done && den_done); ++n) {
        p *= inv;
        if (n % 2 == 1 && !num_done) {
            const double term = t.e[n] * p;
            if (std::abs(term) > last_num) {
                num_done = true;
            } else {
                num += term;
                last_num = std::abs(term);
                num_done = last_num < kEps * std::abs(num);
            }
        } else if (n % 2 == 0 && !den_done) {
            const double term = t.c[n] * p;
            if (std::abs(term) > last_den) {
                den_done = true;
            } else {
                den += term;
                last_den = std::abs(term);
                den_done = last_den < kEps;
            }
        }
    }
    return std::sqrt(z) * num / den;
}

double zeta_difference(double z_lo, double dz) {
    if (dz == 0.0) return 0.0;
    const double z_hi = z_lo + dz;
    const double denom = z_hi * std::sqrt(z_hi) + z_lo * std::sqrt(z_lo);
    return 2.0 / 3.0 * dz * (z_hi * z_hi + z_hi * z_lo + z_lo * z_lo) / denom;
}

AiryValues airy_via_ode_oracle(double z) {
    if (!std::isfinite(z) || z < 0.0 || z > 50.0) {
        throw DomainError("airy_via_ode_oracle: argument must lie in [0, 50]");
    }
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 3>;
    // state = (w, w', int dt / w^2)
    const auto system = [](const State& s, State& ds, double t) {
        ds[0] = s[1];
        ds[1] = t * s[0];
        ds[2] = 1.0 / (s[0] * s[0]);
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(1e-30, 1e-14);

    State s{airy_constants::bi0(), airy_constants::bip0(), 0.0};
    try {
        if (z > 0.0) odeint::integrate_adaptive(stepper, system, s, 0.0, z, 1e-3);
        const double bi = s[0];
        const double bip = s[1];

        // Carry the integral far enough that the neglected remainder is
        // suppressed by e^{-40} relative to the retained part.
        const double z_far = std::pow(1.5 * (zeta_of(z) + 20.0), 2.0 / 3.0);
        State far{bi, bip, 0.0};
        odeint::integrate_adaptive(stepper, system, far, z, z_far, 1e-3);
        const double remainder = 1.0 / (far[0] * far[0] * 2.0 * std::sqrt(z_far));
        const double integral = far[2] + remainder;

        AiryValues v;
        v.z = z;
        v.bi = bi;
        v.bip = bip;
        v.ai = bi * integral / kPi;
        v.aip = (bip * integral - 1.0 / bi) / kPi;
        fill_scaled_from_unscaled(v);
        if (!std::isfinite(v.ai) || !std::isfinite(v.bi)) {
            throw OracleError("airy_via_ode_oracle: non-finite result");
        }
        return v;
    } catch (const odeint::step_adjustment_error& e) {
        throw OracleError(std::string("airy_via_ode_oracle: ") + e.what());
    }
}

}  // namespace casimir
