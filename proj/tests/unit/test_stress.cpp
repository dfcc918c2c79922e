#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "casimir/airy.hpp"
#include "casimir/errors.hpp"
#include "casimir/greens.hpp"
#include "casimir/stress.hpp"

using namespace casimir;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

struct Ref {
    double kappa, eta, below, net;
};

// 80-digit evaluation of the literal N/D and N/D - Ai'/Ai.
const Ref kRefs[] = {
    {0, 0.001, -0.68425343956060223805, 0.096815750005386514969},
    {0.5, 0.001, -0.81579694924741061888, 0.086922686910266129774},
    {1, 0.001, -1.1467268481974005599, 0.067493082344086498612},
    {3, 0.001, -3.0190086147391312502, 0.024490647778485625925},
    {10, 0.001, -10.003176218081457739, 0.0043184787691275464025},
    {30, 0.001, -30.001390243946148103, 0.00055411691590498494854},
    {0, 1, -0.77225253613597879242, 0.40406943100772223067},
    {0.5, 1, -0.92811587277156967531, 0.34126240572781104155},
    {1, 1, -1.2889436232464995295, 0.23121976493832905134},
    {3, 1, -3.1368806338843365388, 0.049924799710125989645},
    {10, 1, -10.047398847237587866, 0.0049504995442807551051},
    {30, 1, -30.016384563716341112, 0.00055493895742604387187},
    {0, 1000, -3.1367582215806043705, 0.050047212013858157959},
    {0.5, 1000, -3.1766844675482854849, 0.048823237389997094267},
    {1, 1000, -3.2934910559183812778, 0.045486733871702805989},
    {3, 1000, -4.3456399014510731938, 0.026319390074418984028},
    {10, 1000, -10.485814521597255508, 0.0045454577470971060406},
    {30, 1000, -30.165931526466800188, 0.00054945055013410799372},
};

// 60-digit quadrature of the literal integrand plus the tail model at kappa = 40.
struct ForceRef {
    double eta, f;
};
const ForceRef kForceRefs[] = {
    {0.01, 0.00337086995065558},
    {1.0, 0.114502935269238},
    {10.0, 0.40747249413887},
    {100.0, 1.25388796521637},
};

}  // namespace

TEST_CASE("integrand_above: definitional values and printed expansion") {
    CHECK(integrand_above(0.0, 1.0) == log_deriv_ai(1.0));
    CHECK(integrand_above(2.0, 8.0) == log_deriv_ai(6.0));
    const double k = 10.0;
    CHECK(std::abs(integrand_above(k, 1.0) - (-k - 1.0 / (2.0 * k) - 1.0 / (4.0 * k * k))) < 1e-3);
    CHECK_THROWS_AS(integrand_above(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(integrand_above(1.0, -1.0), DomainError);
}

TEST_CASE("integrand_below: high-precision reference values") {
    for (const Ref& r : kRefs) {
        CAPTURE(r.kappa);
        CAPTURE(r.eta);
        CHECK(rel(integrand_below(r.kappa, r.eta), r.below) < 1e-13);
    }
}

TEST_CASE("integrand_below: kappa = 0 reduces to -Bi'/Bi") {
    for (double eta : {0.001, 0.5, 1.0, 5.0, 1000.0}) {
        CAPTURE(eta);
        const AiryValues v = airy_eval(std::cbrt(eta));
        CHECK(rel(integrand_below(0.0, eta), -v.bip / v.bi) < 1e-12);
    }
}

TEST_CASE("integrand_below: printed expansion and eta -> 0 limit") {
    const double k = 10.0;
    CHECK(std::abs(integrand_below(k, 1.0) - (-k - 1.0 / (2.0 * k) + 1.0 / (4.0 * k * k))) < 1e-3);
    // The two sides differ by O(eta^{1/3}) near eta = 0, so the
    // difference only reaches 1e-9 once eta^{1/3} is ~1e-12.
    struct Small {
        double kappa, diff_1e12, diff_1e36;
    };
    const Small smalls[] = {
        {0.0, 0.000106281447, 1.062914464e-12},  {0.3, 0.0001024122587, 1.024222581e-12},
        {1.0, 7.673667488e-5, 7.674667408e-13}, {2.5, 3.882155022e-5, 3.883154852e-13},
        {7.0, 1.42549885e-5, 1.426498384e-13},  {30.0, 3.323291579e-6, 3.333271608e-14},
    };
    for (const Small& r : smalls) {
        CAPTURE(r.kappa);
        CHECK(rel(integrand_below(r.kappa, 1e-12) - integrand_above(r.kappa, 1e-12), r.diff_1e12) < 1e-6);
        CHECK(rel(integrand_net(r.kappa, 1e-12).net, r.diff_1e12) < 1e-9);
        CHECK(std::abs(integrand_below(r.kappa, 1e-36) - integrand_above(r.kappa, 1e-36)) < 1e-9);
        CHECK(std::abs(integrand_net(r.kappa, 1e-36).net - r.diff_1e36) < 1e-15);
    }
}

TEST_CASE("integrand_net: references, identities and the literal difference") {
    for (const Ref& r : kRefs) {
        CAPTURE(r.kappa);
        CAPTURE(r.eta);
        const StressIntegrandSample s = integrand_net(r.kappa, r.eta);
        CHECK(s.kappa == r.kappa);
        CHECK(rel(s.net, r.net) < 1e-13);
        CHECK(s.above == integrand_above(r.kappa, r.eta));
        CHECK(s.below == integrand_below(r.kappa, r.eta));
        CHECK(std::abs(s.below - s.above - s.net) <= 8.0 * kEps * std::abs(s.above));
    }
    const StressIntegrandSample zero = integrand_net(3.7, 0.0);
    CHECK(zero.net == 0.0);
    CHECK(zero.above == zero.below);

    const AiryValues v = airy_eval(1.0);
    const double at_one = -(v.aip / v.ai + v.bip / v.bi);
    CHECK(rel(integrand_net(0.0, 1.0).net, at_one) < 1e-13);
    CHECK(integrand_net(0.0, 1.0).net > 0.0);
    CHECK(std::abs(integrand_net(10.0, 1.0).net - 1.0 / (2.0 * (100.0 + 1.0))) < 2e-3);
}

TEST_CASE("integrand_net: zero at eta = 0 and positive for eta > 0") {
    for (double kappa = 0.0; kappa <= 50.0; kappa += 0.37) CHECK(integrand_net(kappa, 0.0).net == 0.0);
    for (double eta : log_grid(1e-3, 1e3, 13)) {
        for (double kappa = 0.0; kappa <= 20.0; kappa += 0.25) {
            CAPTURE(eta);
            CAPTURE(kappa);
            CHECK(integrand_net(kappa, eta).net > 0.0);
        }
    }
}

TEST_CASE("integrand_net: stays accurate at very large kappa") {
    for (double kappa : {1e2, 1e4, 1e6, 1e9, 1e12}) {
        CAPTURE(kappa);
        const double z = kappa * kappa + 1.0;
        // -(ln Ai Bi)'(z) = 1/(2z) + 15/(32 z^4) + ...
        const double net = integrand_net(kappa, 1.0).net;
        CHECK(rel(net, 0.5 / z + 15.0 / (32.0 * z * z * z * z)) < 1e-14);
    }
}

TEST_CASE("three-term expansions hold to O(kappa^-3)") {
    for (double kappa : {10.0, 20.0, 40.0, 80.0}) {
        CAPTURE(kappa);
        const double head = -kappa - 1.0 / (2.0 * kappa);
        const double k3 = kappa * kappa * kappa;
        CHECK(std::abs(integrand_above(kappa, 1.0) - (head - 0.25 / (kappa * kappa))) * k3 < 1.0);
        CHECK(std::abs(integrand_below(kappa, 1.0) - (head + 0.25 / (kappa * kappa))) * k3 < 1.0);
    }
}

TEST_CASE("integrands agree with the coincident derivative of the Green's functions") {
    // Mixed difference inside one ordering, using G = 0 on the plate:
    // [G(a + 2h, a + h) - G(a + h, a + h)] / h^2 -> d_x d_x' G at the plate,
    // with the O(h) and O(h^2) offsets removed by Richardson steps.
    const auto corner = [](auto&& g, double h) {
        const auto m = [&](double t) { return (g(2.0 * t, t) - g(t, t)) / (t * t); };
        const double r1 = 2.0 * m(h / 2) - m(h);
        const double r2 = 2.0 * m(h / 4) - m(h / 2);
        return (4.0 * r2 - r1) / 3.0;
    };
    for (double eta : {0.5, 1.0, 5.0}) {
        const PlateConfig cfg = PlateConfig::from_eta(eta);
        const double s = momentum_scale(cfg);
        for (double kappa : {0.0, 0.3, 1.0, 3.0}) {
            CAPTURE(eta);
            CAPTURE(kappa);
            const double h = 1e-3 / (1.0 + kappa);
            const double above =
                corner([&](double t, double u) { return greens_linear_above(1.0 + t, 1.0 + u, kappa, cfg); }, h) / s;
            const double below =
                corner([&](double t, double u) { return greens_linear_below(1.0 - t, 1.0 - u, kappa, cfg); }, h) / s;
            CHECK(rel(above, integrand_above(kappa, eta)) < 1e-6);
            CHECK(rel(below, integrand_below(kappa, eta)) < 1e-6);
        }
    }
}

TEST_CASE("tail model") {
    CHECK(std::abs(tail_model(1.0, 1.0) - 0.0625) < 1e-15);
    CHECK(tail_model(1e300, 1.0) < 1e-300);
    for (double eta : {0.01, 1.0, 100.0}) {
        for (double k : {1.0, 10.0, 1e3}) CHECK(tail_model(k, eta) < 1.0 / (4.0 * kPi * k));
    }
    // Against a direct quadrature of the model integrand.
    const QuadResult q = integrate_semi_infinite(
        [](double k) { return 0.5 / (k * k + std::cbrt(3.0)) / (2.0 * kPi); }, QuadratureSpec{}, std::nullopt, 2.0);
    CHECK(rel(tail_model(2.0, 3.0), q.value) < 1e-12);
    CHECK(tail_model_admissible(10.0, 1.0));
    CHECK_FALSE(tail_model_admissible(0.5, 1.0));
    CHECK(tail_model_mismatch(100.0, 1.0) < 1e-10);
    CHECK_THROWS_AS(tail_model(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(tail_model(1.0, 0.0), DomainError);
}

TEST_CASE("force_exact: eta = 0, references and error honesty") {
    const QuadratureSpec spec;
    const ForceResult zero = force_exact(0.0, spec);
    CHECK(zero.f_eta == 0.0);
    CHECK(zero.err_est == 0.0);
    for (const ForceRef& r : kForceRefs) {
        CAPTURE(r.eta);
        const ForceResult f = force_exact(r.eta, spec);
        CHECK(f.eta == r.eta);
        CHECK(rel(f.f_eta, r.f) < 1e-10);
        CHECK(std::abs(f.f_eta - r.f) <= 10.0 * f.err_est + 1e-13 * r.f);
        CHECK(f.err_est >= 0.0);
        CHECK(f.err_est < 1e-8 * f.f_eta);
        CHECK(f.n_evals > 0);
        CHECK(f.kappa_max >= 10.0);
    }
    CHECK(force_exact(10.0, spec).f_eta > 0.0);
    CHECK_THROWS_AS(force_exact(-1.0, spec), DomainError);
}

TEST_CASE("force_exact: cutoff policies") {
    QuadratureSpec fixed;
    fixed.kappa_max_policy = KappaMaxPolicy::fixed(100.0);
    const ForceResult adaptive = force_exact(1.0, QuadratureSpec{});
    const ForceResult at100 = force_exact(1.0, fixed);
    CHECK(at100.kappa_max == 100.0);
    CHECK(rel(at100.f_eta, adaptive.f_eta) < 1e-9);

    fixed.kappa_max_policy = KappaMaxPolicy::fixed(0.5);
    CHECK_THROWS_AS(force_exact(1.0, fixed), ToleranceError);

    // The adaptive cutoff satisfies its own stopping rule.
    const double tail = tail_model(adaptive.kappa_max, 1.0);
    CHECK(tail_model_admissible(adaptive.kappa_max, 1.0));
    CHECK(tail < 0.1 * 1e-9 * adaptive.f_eta);

    QuadratureSpec starved;
    starved.max_subdivisions = 1;
    starved.rel_tol = 1e-14;
    CHECK_THROWS_AS(force_exact(1.0, starved), ToleranceError);
}

TEST_CASE("force_exact: deterministic") {
    const ForceResult a = force_exact(2.5, QuadratureSpec{});
    const ForceResult b = force_exact(2.5, QuadratureSpec{});
    CHECK(a.f_eta == b.f_eta);
    CHECK(a.err_est == b.err_est);
    CHECK(a.n_evals == b.n_evals);
    CHECK(a.kappa_max == b.kappa_max);
}

TEST_CASE("force curve: positive, increasing, cusp at the origin") {
    const QuadratureSpec spec;
    double prev = 0.0;
    for (double eta : log_grid(1e-2, 1e2, 25)) {
        const double f = force_exact(eta, spec).f_eta;
        CHECK(f > 0.0);
        CHECK(f > prev);
        prev = f;
    }
    for (double eta : log_grid(1e-4, 5e-3, 6)) {
        const double p = std::log(force_exact(2.0 * eta, spec).f_eta / force_exact(eta, spec).f_eta) / std::log(2.0);
        CAPTURE(eta);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    // Deep in the large-eta regime the net integrand is 1/(2(kappa^2 + eta^{1/3}))
    // at every kappa, so f -> eta^{1/2}/8.
    const double big = 1e6;
    CHECK(rel(force_exact(big, spec).f_eta, std::sqrt(big) / 8.0) < 1e-3);
}

TEST_CASE("classic two-plate force") {
    const QuadratureSpec spec;
    CHECK(rel(force_classic(1.0, spec), -kPi / 24.0) < 1e-10);
    CHECK(std::abs(force_classic(1.0, spec) - -0.1308996939) < 1e-10);
    CHECK(rel(force_classic(2.0, spec), -kPi / 96.0) < 1e-10);
    CHECK(std::abs(force_classic(2.0, spec) - -0.0327249235) < 1e-10);
    CHECK(rel(force_classic(0.3, spec), -kPi / (24.0 * 0.09)) < 1e-10);
    CHECK(classic_integrand(0.0, 2.0) == 0.5);
    CHECK(rel(classic_integrand(1e-9, 2.0), 0.5) < 1e-8);
    const double K = 0.7, a = 1.3;
    CHECK(rel(classic_integrand(K, a), K * (1.0 / std::tanh(K * a) - 1.0)) < 1e-14);
    CHECK(classic_integrand(1e6, 1.0) == 0.0);
    CHECK_THROWS_AS(force_classic(0.0, spec), DomainError);
}

TEST_CASE("perturbative integrands") {
    for (double K : {1e-3, 0.1, 1.0, 3.0, 30.0}) {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double b : {0.0, 0.01, 1.0, 10.0}) {
                CAPTURE(K);
                CAPTURE(a);
                CAPTURE(b);
                const PerturbativeSample s = perturbative_integrands(K, a, b);
                // below - above cancels the -K terms; compare on the scale of
                // the terms that survive.
                const double scale = std::max(std::abs(s.net), b * (1.0 + 2.0 * K * a) / (4.0 * K * K));
                CHECK(std::abs(s.below - s.above - s.net) <= 1e-12 * std::max(scale, K));
                if (b == 0.0) {
                    CHECK(s.below == -K);
                    CHECK(s.above == -K);
                    CHECK(s.net == 0.0);
                } else {
                    CHECK(s.net > 0.0);
                }
            }
        }
    }
    const double K = 1e-6;
    CHECK(rel(perturbative_integrands(K, 2.0, 3.0).net, 3.0 * 2.0 / K) < 1e-5);
    CHECK_THROWS_AS(perturbative_integrands(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("perturbative force: positive, infrared-divergent") {
    const QuadratureSpec spec;
    for (double k_min : {1e-6, 1e-3, 0.1, 1.0, 10.0}) CHECK(force_perturbative(1.0, 1.0, k_min, spec) > 0.0);
    const double a = 1.0, b = 1.0, k_min = 1e-4;
    const double step = force_perturbative(a, b, k_min / 2, spec) - force_perturbative(a, b, k_min, spec);
    CHECK(rel(step, a * b / (2.0 * kPi) * std::log(2.0)) < 0.05);
    double prev = 0.0;
    for (double k : {10.0, 1.0, 0.1, 0.01, 1e-3}) {
        const double f = force_perturbative(a, b, k, spec);
        CHECK(f > prev);
        prev = f;
    }
    const double far = force_perturbative(a, b, 1e8, spec);
    CHECK(far < 1e-8);
    CHECK(rel(far, b / (4.0 * kPi * 1e8)) < 1e-6);
    CHECK(force_perturbative(a, 0.0, 1e-3, spec) == 0.0);
    CHECK(rel(force_perturbative(a, 3.0, 0.2, spec), 3.0 * force_perturbative(a, 1.0, 0.2, spec)) < 1e-14);
    CHECK_THROWS_AS(force_perturbative(a, b, 0.0, spec), DomainError);
}
