#include "casimir/stress.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "casimir/airy.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this the adaptive search gives up; the tail is then ~1e-16 of any
// integral the search could still be chasing.
constexpr double kCutoffLimit = 1e15;

void check_args(double kappa, double eta, const char* who) {
    if (!std::isfinite(kappa) || kappa < 0.0) throw DomainError(std::string(who) + ": kappa must be >= 0");
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError(std::string(who) + ": eta must be >= 0");
}

// Everything the below-plate ratio needs, with e^{zeta2 - 2 zeta1} removed
// from numerator and denominator.
struct ReducedRatio {
    double num = 0.0;       // N'
    double den = 0.0;       // D'
    double p_times_e = 0.0; // P e^{-2(zeta2 - zeta1)}
    double bi2_s = 0.0;
    double z2 = 0.0;
};

ReducedRatio reduced_ratio(double kappa, double eta) {
    const double z1 = kappa * kappa;
    const double d = std::cbrt(eta);
    const AiryValues v1 = airy_eval(z1);
    const AiryValues v2 = airy_eval(z1 + d);
    // Ai'Bi + AiBi' at z1 summed as a log-derivative: its two terms cancel to
    // -1/(2 z1) relative to each other at large z1.
    const double p = log_deriv_ai_bi(z1) * v1.ai_s * v1.bi_s;
    const double q = 2.0 * v1.ai_s * v1.aip_s;
    const double e = std::exp(-2.0 * zeta_difference(z1, d));
    ReducedRatio r;
    r.p_times_e = p * e;
    r.num = q * v2.bip_s - v2.aip_s * r.p_times_e;
    r.den = v2.ai_s * r.p_times_e - q * v2.bi_s;
    r.bi2_s = v2.bi_s;
    r.z2 = z1 + d;
    if (r.den == 0.0 || !std::isfinite(r.den)) {
        std::ostringstream msg;
        msg << "integrand_below: vanishing denominator at kappa=" << kappa << ", eta=" << eta;
        throw SingularityError(msg.str());
    }
    return r;
}

}  // namespace

double integrand_above(double kappa, double eta) {
    check_args(kappa, eta, "integrand_above");
    return log_deriv_ai(kappa * kappa + std::cbrt(eta));
}

double integrand_below(double kappa, double eta) {
    check_args(kappa, eta, "integrand_below");
    const ReducedRatio r = reduced_ratio(kappa, eta);
    return r.num / r.den;
}

StressIntegrandSample integrand_net(double kappa, double eta) {
    check_args(kappa, eta, "integrand_net");
    StressIntegrandSample s;
    s.kappa = kappa;
    if (eta == 0.0) {
        s.above = s.below = log_deriv_ai(kappa * kappa);
        s.net = 0.0;
        return s;
    }
    const ReducedRatio r = reduced_ratio(kappa, eta);
    s.above = log_deriv_ai(r.z2);
    s.below = r.num / r.den;
    s.net = -log_deriv_ai_bi(r.z2) + r.p_times_e / (kPi * r.den * r.bi2_s);
    return s;
}

double tail_model(double kappa_max, double eta) {
    if (!std::isfinite(kappa_max) || !(kappa_max > 0.0)) throw DomainError("tail_model: kappa_max must be > 0");
    if (!std::isfinite(eta) || !(eta > 0.0)) throw DomainError("tail_model: eta must be > 0");
    const double m = std::pow(eta, 1.0 / 6.0);
    // pi/2 - arctan(k/m) = atan2(m, k), accurate when k >> m.
    return std::atan2(m, kappa_max) / (4.0 * kPi * m);
}

double tail_model_mismatch(double kappa, double eta) {
    const double net = integrand_net(kappa, eta).net;
    const double model = 0.5 / (kappa * kappa + std::cbrt(eta));
    return std::abs(net - model) / net;
}

bool tail_model_admissible(double kappa_max, double eta) { return tail_model_mismatch(kappa_max, eta) < 0.01; }

ForceResult force_exact(double eta, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError("force_exact: eta must be >= 0");
    ForceResult result;
    result.eta = eta;
    if (eta == 0.0) return result;

    const Integrand g = [eta](double kappa) { return integrand_net(kappa, eta).net / (2.0 * kPi); };
    double integral = 0.0;
    double quad_err = 0.0;
    const auto add_piece = [&](double lo, double hi) {
        const QuadResult q = integrate_finite(g, lo, hi, spec);
        result.n_evals += q.n_evals;
        if (!q.converged) {
            std::ostringstream msg;
            msg << "force_exact: quadrature did not converge on [" << lo << ", " << hi << "] at eta=" << eta
                << " (value " << q.value << ", err_est " << q.err_est << ", " << q.n_evals << " evaluations)";
            throw ToleranceError(msg.str());
        }
        integral += q.value;
        quad_err += q.err_est;
    };

    double kappa_max = 0.0;
    if (!spec.kappa_max_policy.is_adaptive()) {
        kappa_max = *spec.kappa_max_policy.fixed_value;
        add_piece(0.0, kappa_max);
        if (!tail_model_admissible(kappa_max, eta)) {
            std::ostringstream msg;
            msg << "force_exact: tail model not admissible at fixed kappa_max=" << kappa_max << " for eta=" << eta
                << " (relative mismatch " << tail_model_mismatch(kappa_max, eta) << ")";
            throw ToleranceError(msg.str());
        }
    } else {
        kappa_max = 10.0 * std::max(1.0, std::pow(eta, 1.0 / 6.0));
        add_piece(0.0, kappa_max);
        while (!(tail_model_admissible(kappa_max, eta) &&
                 tail_model(kappa_max, eta) < 0.1 * spec.rel_tol * std::abs(integral))) {
            if (kappa_max > kCutoffLimit) {
                std::ostringstream msg;
                msg << "force_exact: no admissible kappa_max below " << kCutoffLimit << " for eta=" << eta;
                throw ToleranceError(msg.str());
            }
            add_piece(kappa_max, 2.0 * kappa_max);
            kappa_max *= 2.0;
        }
    }

    const double tail = tail_model(kappa_max, eta);
    const double scale = std::pow(eta, 2.0 / 3.0);
    result.kappa_max = kappa_max;
    result.f_eta = scale * (integral + tail);
    result.err_est = scale * (quad_err + tail_model_mismatch(kappa_max, eta) * tail);
    return result;
}

double classic_integrand(double K, double a) {
    if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("classic_integrand: a must be > 0");
    if (!(K >= 0.0)) throw DomainError("classic_integrand: K must be >= 0");
    if (K == 0.0) return 1.0 / a;
    return 2.0 * K / std::expm1(2.0 * K * a);
}

double force_classic(double a, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("force_classic: a must be > 0");
    const QuadResult q =
        integrate_semi_infinite([a](double K) { return classic_integrand(K, a) / (2.0 * kPi); }, spec);
    if (!q.converged) {
        std::ostringstream msg;
        msg << "force_classic: quadrature did not converge (err_est " << q.err_est << ")";
        throw ToleranceError(msg.str());
    }
    return -q.value;
}

PerturbativeSample perturbative_integrands(double K, double a, double b) {
    if (!std::isfinite(K) || !(K > 0.0)) throw DomainError("perturbative_integrands: K must be > 0");
    if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("perturbative_integrands: a must be > 0");
    if (!std::isfinite(b) || b < 0.0) throw DomainError("perturbative_integrands: b must be >= 0");
    const double ka = K * a;
    const double k2 = 4.0 * K * K;
    PerturbativeSample s;
    s.below = -K + b * (1.0 - 2.0 * ka - 2.0 * std::exp(-2.0 * ka)) / k2;
    s.above = -K - b * (1.0 + 2.0 * ka) / k2;
    s.net = b * -std::expm1(-2.0 * ka) / (2.0 * K * K);
    return s;
}

double force_perturbative(double a, double b, double k_min, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("force_perturbative: a must be > 0");
    if (!std::isfinite(b) || b < 0.0) throw DomainError("force_perturbative: b must be >= 0");
    if (!std::isfinite(k_min) || !(k_min > 0.0)) throw DomainError("force_perturbative: k_min must be > 0");
    if (b == 0.0) return 0.0;
    // Integrate the b-independent shape and scale afterwards.
    const auto shape = [a](double K) { return -std::expm1(-2.0 * K * a) / (2.0 * K * K) / (2.0 * kPi); };
    const QuadResult q = integrate_semi_infinite(shape, spec, std::nullopt, k_min);
    if (!q.converged) {
        std::ostringstream msg;
        msg << "force_perturbative: quadrature did not converge (err_est " << q.err_est << ")";
        throw ToleranceError(msg.str());
    }
    return b * q.value;
}

}  // namespace casimir
