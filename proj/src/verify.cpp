#include "casimir/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "casimir/airy.hpp"
#include "casimir/errors.hpp"
#include "casimir/greens.hpp"
#include "casimir/oracle.hpp"
#include "casimir/stress.hpp"

namespace casimir {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

using Slice = std::function<double(double)>;

double one_sided_derivative(const Slice& g, double t0, double dir, double h) {
    const auto d = [&](double step) {
        const double f1 = g(t0 + dir * step);
        const double f2 = g(t0 + 2.0 * dir * step);
        return dir * (-3.0 * g(t0) + 4.0 * f1 - f2) / (2.0 * step);
    };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

struct Case {
    double eta;
    double kappa;
};

const Case kGreensCases[] = {{0.5, 0.3}, {0.5, 1.0}, {0.5, 3.0}, {5.0, 0.3}, {5.0, 1.0}, {5.0, 3.0}};

CheckResult check(std::string name, double measured, double tolerance) {
    return {std::move(name), std::isfinite(measured) && measured <= tolerance, measured, tolerance};
}

// An exception inside a check is a failed check, not a crashed suite.
CheckResult guarded(const std::string& name, double tolerance, const std::function<double()>& f) {
    try {
        return check(name, f(), tolerance);
    } catch (const std::exception&) {
        return {name, false, std::nan(""), tolerance};
    }
}

void airy_suite(std::vector<CheckResult>& out) {
    out.push_back(guarded("airy.wronskian_log_grid", 1e-10, [] { return measure::wronskian_deviation(); }));
    out.push_back(guarded("airy.ode_oracle_0_10", 1e-10, [] { return measure::airy_oracle_deviation(); }));
    out.push_back(guarded("airy.origin_values", 1e-15, [] {
        const AiryValues v = airy_eval(0.0);
        return std::max({rel(v.ai, airy_constants::ai0()), rel(v.aip, airy_constants::aip0()),
                         rel(v.bi, airy_constants::bi0()), rel(v.bip, airy_constants::bip0())});
    }));
    out.push_back(guarded("airy.log_deriv_sign", 0.0, [] {
        double bad = 0.0;
        for (double z : {0.0, 0.5, 2.0, 9.0, 11.0, 1e3, 1e6}) {
            if (!(log_deriv_ai(z) < 0.0) || !(log_deriv_bi(z) > 0.0)) bad += 1.0;
        }
        return bad;
    }));
    out.push_back(guarded("airy.log_deriv_ai_bi_large_z", 1e-12, [] {
        const double z = 1e4;
        return rel(log_deriv_ai_bi(z), -1.0 / (2.0 * z) - 15.0 / (32.0 * z * z * z * z));
    }));
}

void greens_suite(std::vector<CheckResult>& out) {
    out.push_back(guarded("greens.dirichlet", 0.0, [] { return measure::greens_dirichlet_deviation(); }));
    out.push_back(guarded("greens.symmetry", 1e-12, [] { return measure::greens_symmetry_deviation(); }));
    out.push_back(guarded("greens.unit_jump", 1e-6, [] { return measure::greens_jump_deviation(); }));
    out.push_back(guarded("greens.fd_oracle", 1e-5, [] { return measure::greens_oracle_deviation(); }));
}

void stress_suite(std::vector<CheckResult>& out) {
    out.push_back(guarded("stress.eta0_pointwise_zero", 0.0, [] { return measure::eta_zero_net(); }));
    out.push_back(guarded("stress.f_of_zero", 0.0, [] { return std::abs(force_exact(0.0, QuadratureSpec{}).f_eta); }));
    out.push_back(guarded("stress.printed_expansion_k10_eta1", 1e-3,
                          [] { return measure::printed_expansion_deviation(10.0, 1.0); }));
    out.push_back(guarded("stress.net_large_kappa_expansion", 1e-6, [] {
        const double kappa = 30.0, eta = 1.0;
        const double z = kappa * kappa + 1.0;
        return rel(integrand_net(kappa, eta).net, 1.0 / (2.0 * z) + 15.0 / (32.0 * z * z * z * z));
    }));
    out.push_back(guarded("stress.net_equals_below_minus_above", 1e-12, [] {
        double worst = 0.0;
        for (double eta : {0.01, 1.0, 100.0}) {
            for (double kappa : {0.0, 0.5, 2.0}) {
                const StressIntegrandSample s = integrand_net(kappa, eta);
                worst = std::max(worst, std::abs(s.below - s.above - s.net) / std::max(1.0, std::abs(s.above)));
            }
        }
        return worst;
    }));
    out.push_back(guarded("stress.tail_model_admissible_at_cutoff", 0.01, [] {
        const ForceResult r = force_exact(1.0, QuadratureSpec{});
        return tail_model_mismatch(r.kappa_max, 1.0);
    }));
    out.push_back(guarded("stress.force_positive", 0.0, [] {
        double bad = 0.0;
        for (double eta : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
            if (!(force_exact(eta, QuadratureSpec{}).f_eta > 0.0)) bad += 1.0;
        }
        return bad;
    }));
    out.push_back(guarded("stress.classic_a1", 1e-8, [] { return measure::classic_deviation(1.0); }));
    out.push_back(guarded("stress.classic_a2", 1e-8, [] { return measure::classic_deviation(2.0); }));
    out.push_back(guarded("stress.perturbative_identity", 1e-12,
                          [] { return measure::perturbative_identity_deviation(1.0, 1.0); }));
    out.push_back(guarded("stress.fd_force_eta1", 1e-4, [] { return measure::fd_force_deviation(1.0); }));
}

}  // namespace

std::vector<CheckResult> run_suite(std::string_view suite) {
    std::vector<CheckResult> out;
    if (suite == "airy") {
        airy_suite(out);
    } else if (suite == "greens") {
        greens_suite(out);
    } else if (suite == "stress") {
        stress_suite(out);
    } else if (suite == "all") {
        airy_suite(out);
        greens_suite(out);
        stress_suite(out);
    } else {
        throw DomainError("unknown suite '" + std::string(suite) + "' (expected airy, greens, stress or all)");
    }
    return out;
}

nlohmann::json suite_to_json(std::string_view suite, const std::vector<CheckResult>& checks) {
    nlohmann::json list = nlohmann::json::array();
    bool all = true;
    for (const CheckResult& c : checks) {
        all = all && c.passed;
        nlohmann::json item{{"name", c.name}, {"status", c.passed ? "pass" : "fail"}, {"tolerance", c.tolerance}};
        if (std::isfinite(c.measured)) {
            item["measured"] = c.measured;
        } else {
            item["measured"] = nullptr;
        }
        list.push_back(item);
    }
    return {{"suite", std::string(suite)}, {"passed", all}, {"checks", list}};
}

namespace measure {

double wronskian_deviation(int per_decade) {
    double worst = 0.0;
    const auto one = [&](double z) {
        const AiryValues v = airy_eval(z);
        worst = std::max(worst, std::abs(kPi * (v.ai_s * v.bip_s - v.aip_s * v.bi_s) - 1.0));
    };
    one(0.0);
    const int n = 7 * per_decade;
    for (int i = 0; i <= n; ++i) one(std::pow(10.0, -3.0 + 7.0 * i / n));
    return worst;
}

double airy_oracle_deviation(double step) {
    double worst = 0.0;
    const int n = static_cast<int>(std::lround(10.0 / step));
    for (int i = 0; i <= n; ++i) {
        const double z = i * step;
        const AiryValues o = airy_via_ode_oracle(z);
        const AiryValues v = airy_eval(z);
        worst = std::max({worst, rel(v.ai_s, o.ai_s), rel(v.aip_s, o.aip_s), rel(v.bi_s, o.bi_s),
                          rel(v.bip_s, o.bip_s)});
    }
    return worst;
}

double greens_oracle_deviation() {
    const double above_x[] = {1.05, 1.2, 1.5, 1.8, 2.5, 3.5, 5.0};
    const double below_x[] = {-2.0, -1.0, -0.4, 0.0, 0.1, 0.45, 0.7, 0.95};
    double worst = 0.0;
    for (const Case& c : kGreensCases) {
        const PlateConfig cfg = PlateConfig::from_eta(c.eta);
        for (double xp : {1.25, 2.0}) {
            const BvpSolution s = solve_bvp_above(c.kappa, cfg, xp, default_bvp_grid(c.kappa, cfg, Side::above, xp));
            for (double x : above_x) worst = std::max(worst, rel(s.value_at(x), greens_linear_above(x, xp, c.kappa, cfg)));
        }
        for (double xp : {-0.5, 0.25}) {
            const BvpSolution s = solve_bvp_full(c.kappa, cfg, xp, default_bvp_grid(c.kappa, cfg, Side::below, xp));
            for (double x : below_x) worst = std::max(worst, rel(s.value_at(x), greens_linear_below(x, xp, c.kappa, cfg)));
        }
    }
    return worst;
}

double greens_dirichlet_deviation() {
    double worst = 0.0;
    for (const Case& c : kGreensCases) {
        const PlateConfig cfg = PlateConfig::from_eta(c.eta);
        for (double xp : {1.1, 3.0}) worst = std::max(worst, std::abs(greens_linear_above(1.0, xp, c.kappa, cfg)));
        for (double xp : {-1.0, 0.5}) worst = std::max(worst, std::abs(greens_linear_below(1.0, xp, c.kappa, cfg)));
    }
    return worst;
}

double greens_symmetry_deviation() {
    double worst = 0.0;
    for (const Case& c : kGreensCases) {
        const PlateConfig cfg = PlateConfig::from_eta(c.eta);
        const double up = greens_linear_above(1.3, 2.7, c.kappa, cfg);
        worst = std::max(worst, rel(greens_linear_above(2.7, 1.3, c.kappa, cfg), up));
        const double down = greens_linear_below(-0.6, 0.4, c.kappa, cfg);
        worst = std::max(worst, rel(greens_linear_below(0.4, -0.6, c.kappa, cfg), down));
    }
    return worst;
}

double greens_jump_deviation() {
    double worst = 0.0;
    const double h = 1e-3;
    for (const Case& c : kGreensCases) {
        const PlateConfig cfg = PlateConfig::from_eta(c.eta);
        const double xa = 1.7;
        const Slice ga = [&](double x) { return greens_linear_above(x, xa, c.kappa, cfg); };
        worst = std::max(worst, std::abs(one_sided_derivative(ga, xa, 1.0, h) - one_sided_derivative(ga, xa, -1.0, h) + 1.0));
        for (double xb : {-0.4, 0.5}) {
            const Slice gb = [&](double x) { return greens_linear_below(x, xb, c.kappa, cfg); };
            worst = std::max(worst,
                             std::abs(one_sided_derivative(gb, xb, 1.0, h) - one_sided_derivative(gb, xb, -1.0, h) + 1.0));
        }
    }
    return worst;
}

double eta_zero_net() {
    double worst = 0.0;
    for (double kappa : {0.0, 0.1, 1.0, 5.0, 20.0}) worst = std::max(worst, std::abs(integrand_net(kappa, 0.0).net));
    return worst;
}

double printed_expansion_deviation(double kappa, double eta) {
    const double head = -kappa - std::cbrt(eta) / (2.0 * kappa);
    const double third = 1.0 / (4.0 * kappa * kappa);
    return std::max(std::abs(integrand_above(kappa, eta) - (head - third)),
                    std::abs(integrand_below(kappa, eta) - (head + third)));
}

double classic_deviation(double a) {
    const double want = -kPi / (24.0 * a * a);
    return rel(force_classic(a, QuadratureSpec{}), want);
}

double perturbative_identity_deviation(double a, double b) {
    double worst = 0.0;
    for (double K : {1e-3, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0}) {
        const PerturbativeSample s = perturbative_integrands(K, a, b);
        const double scale = std::max({std::abs(s.net), b * (1.0 + 2.0 * K * a) / (4.0 * K * K), K});
        worst = std::max(worst, std::abs(s.below - s.above - s.net) / scale);
    }
    return worst;
}

double fd_force_deviation(double eta) {
    const ForceResult fd = force_from_fd(eta);
    const ForceResult exact = force_exact(eta, QuadratureSpec{});
    return rel(fd.f_eta, exact.f_eta);
}

}  // namespace measure

}  // namespace casimir
