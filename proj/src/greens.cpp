#include "casimir/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/airy.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;

// m * e^{e}. Keeps Ai/Bi combinations representable whatever the argument.
struct Scaled {
    double m = 0.0;
    double e = 0.0;
};

Scaled operator*(Scaled x, Scaled y) { return {x.m * y.m, x.e + y.e}; }
Scaled operator*(double c, Scaled x) { return {c * x.m, x.e}; }
Scaled operator/(Scaled x, Scaled y) { return {x.m / y.m, x.e - y.e}; }
Scaled operator+(Scaled x, Scaled y) {
    if (x.m == 0.0) return y;
    if (y.m == 0.0) return x;
    const double e = std::max(x.e, y.e);
    return {x.m * std::exp(x.e - e) + y.m * std::exp(y.e - e), e};
}
Scaled operator-(Scaled x, Scaled y) { return x + (-1.0) * y; }
double value_of(Scaled x) { return x.m == 0.0 ? 0.0 : x.m * std::exp(x.e); }

// Ai, Ai', Bi, Bi' at kappa^2 + d with exponents measured relative to
// zeta(kappa^2); the reference factor cancels in every Green's function.
struct RelativeAiry {
    Scaled ai, aip, bi, bip;
};

RelativeAiry relative_airy(double kappa_sq, double d) {
    const AiryValues v = airy_eval(kappa_sq + d);
    const double dz = zeta_difference(kappa_sq, d);
    return {{v.ai_s, -dz}, {v.aip_s, -dz}, {v.bi_s, dz}, {v.bip_s, dz}};
}

void require_finite(double v, const char* who, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(who) + ": " + what + " must be finite");
}

double linear_scale(const PlateConfig& cfg, const char* who) {
    if (!(cfg.eta() > 0.0)) {
        throw DomainError(std::string(who) + ": requires eta > 0 (use the free-field form at eta = 0)");
    }
    return std::cbrt(cfg.b());
}

void check_kappa(double kappa, const char* who) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError(std::string(who) + ": kappa must be >= 0");
}

}  // namespace

PlateConfig::PlateConfig(double a, double b) : a_(a), b_(b), eta_(b * a * a * a) {
    if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("PlateConfig: plate height a must be > 0");
    if (!std::isfinite(b) || b < 0.0) throw DomainError("PlateConfig: slope b must be >= 0");
}

PlateConfig PlateConfig::from_eta(double eta, double a) {
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError("PlateConfig: eta must be >= 0");
    return PlateConfig(a, eta / (a * a * a));
}

double momentum_scale(const PlateConfig& cfg) { return cfg.b() > 0.0 ? std::cbrt(cfg.b()) : 1.0 / cfg.a(); }

double greens_free_between(double x, double xp, double K, double a) {
    require_finite(x, "greens_free_between", "x");
    require_finite(xp, "greens_free_between", "x'");
    if (!(a > 0.0) || !(K > 0.0) || !std::isfinite(K) || !std::isfinite(a)) {
        throw DomainError("greens_free_between: need K > 0 and a > 0");
    }
    const double lo = std::min(x, xp);
    const double hi = std::max(x, xp);
    if (lo < 0.0 || hi > a) throw DomainError("greens_free_between: points must lie in [0, a]");
    // sinh(u) = e^u (1 - e^{-2u}) / 2 in every factor.
    const double num = -std::expm1(-2.0 * K * lo) * -std::expm1(-2.0 * K * (a - hi));
    const double den = 2.0 * K * -std::expm1(-2.0 * K * a);
    return std::exp(-K * (hi - lo)) * num / den;
}

double greens_free_above(double x, double xp, double K, double a) {
    require_finite(x, "greens_free_above", "x");
    require_finite(xp, "greens_free_above", "x'");
    if (!(K > 0.0) || !std::isfinite(K) || !std::isfinite(a)) throw DomainError("greens_free_above: need K > 0");
    const double lo = std::min(x, xp);
    const double hi = std::max(x, xp);
    if (lo < a) throw DomainError("greens_free_above: points must lie in [a, inf)");
    return std::exp(-K * (hi - lo)) * -std::expm1(-2.0 * K * (lo - a)) / (2.0 * K);
}

double greens_linear_above(double x, double xp, double kappa, const PlateConfig& cfg) {
    constexpr const char* who = "greens_linear_above";
    require_finite(x, who, "x");
    require_finite(xp, who, "x'");
    check_kappa(kappa, who);
    const double s = linear_scale(cfg, who);
    const double a = cfg.a();
    const double near = std::min(x, xp);
    const double far = std::max(x, xp);
    if (near < a) throw DomainError("greens_linear_above: points must lie in [a, inf)");

    const double k2 = kappa * kappa;
    const double y_a = k2 + a * s;
    const double y_near = k2 + near * s;
    const AiryValues at_a = airy_eval(y_a);
    const AiryValues at_near = airy_eval(y_near);
    const AiryValues at_far = airy_eval(k2 + far * s);

    // Scaled form of Ai(y_far) [Ai(y_a) Bi(y_near) - Ai(y_near) Bi(y_a)] / Ai(y_a);
    // every exponent left over is a non-positive zeta difference.
    const double decay = zeta_difference(y_near, (far - near) * s);
    const double rise = zeta_difference(y_a, (near - a) * s);
    const double bracket = at_near.bi_s - at_near.ai_s * at_a.bi_s / at_a.ai_s * std::exp(-2.0 * rise);
    return kPi / s * at_far.ai_s * std::exp(-decay) * bracket;
}

double greens_linear_below(double x, double xp, double kappa, const PlateConfig& cfg) {
    constexpr const char* who = "greens_linear_below";
    require_finite(x, who, "x");
    require_finite(xp, who, "x'");
    check_kappa(kappa, who);
    const double s = linear_scale(cfg, who);
    const double a = cfg.a();
    const double lower = std::min(x, xp);
    const double upper = std::max(x, xp);
    if (upper > a) throw DomainError("greens_linear_below: points must lie in (-inf, a]");

    const double k2 = kappa * kappa;
    const RelativeAiry origin = relative_airy(k2, 0.0);
    const RelativeAiry plate = relative_airy(k2, a * s);

    // Decaying solution continued to x > 0: pi [P Ai(y) - Q Bi(y)] with
    // P = (Ai Bi)'(kappa^2) and Q = 2 Ai Ai'(kappa^2).
    const AiryValues at_origin = airy_eval(k2);
    const Scaled p{log_deriv_ai_bi(k2) * at_origin.ai_s * at_origin.bi_s, 0.0};
    const Scaled q = 2.0 * (origin.ai * origin.aip);
    // Wronskian (in y) of the decaying and the plate solutions.
    const Scaled wronskian = p * plate.ai - q * plate.bi;

    const auto decaying = [&](double pos) -> Scaled {
        const RelativeAiry v = relative_airy(k2, std::abs(pos) * s);
        if (pos < 0.0) return v.ai;
        return kPi * (p * v.ai - q * v.bi);
    };
    const auto vanishing = [&](double pos) -> Scaled {
        if (pos >= 0.0) {
            const RelativeAiry v = relative_airy(k2, pos * s);
            return plate.ai * v.bi - v.ai * plate.bi;
        }
        // Continue through x = 0: value and x-slope match, and the slope of
        // the |x| argument flips sign.
        const Scaled val0 = plate.ai * origin.bi - origin.ai * plate.bi;
        const Scaled der0 = plate.ai * origin.bip - origin.aip * plate.bi;
        const Scaled c_ai = kPi * (val0 * origin.bip + der0 * origin.bi);
        const Scaled c_bi = (-kPi) * (der0 * origin.ai + val0 * origin.aip);
        const RelativeAiry v = relative_airy(k2, -pos * s);
        return c_ai * v.ai + c_bi * v.bi;
    };

    const Scaled g = (decaying(lower) * vanishing(upper)) / wronskian;
    return -value_of(g) / s;
}

}  // namespace casimir
