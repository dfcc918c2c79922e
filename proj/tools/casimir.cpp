#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/errors.hpp"
#include "casimir/greens.hpp"
#include "casimir/io.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/stress.hpp"
#include "casimir/verify.hpp"

using namespace casimir;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::optional<double> rel_tol;
    std::optional<double> kappa_max;
    bool json = false;
};

std::optional<double> env_double(const char* name) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        return parse_double(raw);
    } catch (const FormatError&) {
        throw UsageError(std::string(name) + " is not a number: '" + raw + "'");
    }
}

// Flags win over the environment, the environment over the defaults.
QuadratureSpec make_spec(const CommonOptions& opt) {
    QuadratureSpec spec;
    if (auto v = opt.rel_tol ? opt.rel_tol : env_double("CASIMIR_REL_TOL")) spec.rel_tol = *v;
    if (auto v = opt.kappa_max ? opt.kappa_max : env_double("CASIMIR_KAPPA_MAX")) {
        spec.kappa_max_policy = KappaMaxPolicy::fixed(*v);
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--rel-tol", opt.rel_tol, "Relative tolerance of the force quadrature (env CASIMIR_REL_TOL)");
    cmd->add_option("--kappa-max", opt.kappa_max, "Fixed momentum cutoff instead of the adaptive one (env CASIMIR_KAPPA_MAX)");
    cmd->add_flag("--json", opt.json, "Machine-readable output");
}

ForceResult compute(double eta, const QuadratureSpec& spec, ResultCache* cache, const std::string& hash) {
    if (cache) {
        if (auto hit = cache->find(eta, hash)) return *hit;
    }
    return force_exact(eta, spec);
}

// ---------------------------------------------------------------------------

struct ExactArgs {
    CommonOptions common;
    std::optional<double> eta, a, b;
    double hbar_c = 1.0;
    std::string cache;
};

int cmd_exact(const ExactArgs& args) {
    const bool have_eta = args.eta.has_value();
    const bool have_ab = args.a.has_value() || args.b.has_value();
    if (have_eta == have_ab) throw UsageError("give exactly one of --eta or the pair --a/--b");
    if (have_ab && !(args.a && args.b)) throw UsageError("--a and --b must be given together");

    double eta = 0.0;
    std::optional<double> a;
    if (have_eta) {
        if (!(*args.eta >= 0.0) || !std::isfinite(*args.eta)) throw UsageError("--eta must be finite and >= 0");
        eta = *args.eta;
    } else {
        if (!(*args.a > 0.0) || !(*args.b >= 0.0) || !std::isfinite(*args.a) || !std::isfinite(*args.b)) {
            throw UsageError("--a must be > 0 and --b >= 0");
        }
        eta = PlateConfig(*args.a, *args.b).eta();
        a = *args.a;
    }
    if (!(args.hbar_c > 0.0) || !std::isfinite(args.hbar_c)) throw UsageError("--hbar-c must be positive");

    const QuadratureSpec spec = make_spec(args.common);
    const std::string hash = spec_hash(spec);
    std::optional<ResultCache> cache;
    if (!args.cache.empty()) cache = ResultCache::load(args.cache);

    const ForceResult r = compute(eta, spec, cache ? &*cache : nullptr, hash);
    if (cache) {
        cache->insert(r, hash);
        cache->save(args.cache);
    }

    std::optional<double> txx;
    if (a) txx = args.hbar_c * r.f_eta / (*a * *a);

    if (args.common.json) {
        nlohmann::json j = to_json(r);
        if (a) {
            j["a"] = *a;
            j["T_xx"] = *txx;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "eta        " << format_double(r.eta) << "\n";
        std::cout << "f(eta)     " << format_double(r.f_eta) << "\n";
        std::cout << "err_est    " << format_double(r.err_est) << "\n";
        std::cout << "kappa_max  " << format_double(r.kappa_max) << "\n";
        std::cout << "n_evals    " << r.n_evals << "\n";
        if (txx) std::cout << "T_xx       " << format_double(*txx) << "  (hbar c = " << format_double(args.hbar_c) << ")\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
    CommonOptions common;
    double eta_min = 0.0, eta_max = 0.0;
    int points = 0;
    std::string spacing = "log";
    std::string out;
    int jobs = 1;
    std::string cache;
};

std::vector<double> eta_grid(double lo, double hi, int n, bool log) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        g[i] = log ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))) : lo + t * (hi - lo);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

int cmd_curve(const CurveArgs& args) {
    if (!(args.eta_min >= 0.0) || !(args.eta_max > args.eta_min) || !std::isfinite(args.eta_max)) {
        throw UsageError("need 0 <= eta-min < eta-max");
    }
    if (args.points < 2) throw UsageError("--points must be >= 2");
    if (args.spacing != "log" && args.spacing != "lin") throw UsageError("--spacing must be log or lin");
    const bool log = args.spacing == "log";
    if (log && !(args.eta_min > 0.0)) throw UsageError("log spacing needs eta-min > 0");
    if (args.jobs < 1) throw UsageError("--jobs must be >= 1");

    const QuadratureSpec spec = make_spec(args.common);
    const std::string hash = spec_hash(spec);
    std::optional<ResultCache> cache;
    if (!args.cache.empty()) cache = ResultCache::load(args.cache);

    const std::vector<double> etas = eta_grid(args.eta_min, args.eta_max, args.points, log);
    for (std::size_t i = 1; i < etas.size(); ++i) {
        if (!(etas[i] > etas[i - 1])) throw UsageError("eta grid is not strictly increasing at this resolution");
    }

    std::vector<CurveRow> rows(etas.size());
    std::vector<std::string> failures(etas.size());
    std::atomic<std::size_t> next{0};
    const ResultCache* shared = cache ? &*cache : nullptr;
    const auto worker = [&] {
        for (std::size_t i = next++; i < etas.size(); i = next++) {
            try {
                if (shared) {
                    if (auto hit = shared->find(etas[i], hash)) {
                        rows[i] = *hit;
                        continue;
                    }
                }
                rows[i] = force_exact(etas[i], spec);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const int n_threads = std::min<int>(args.jobs, static_cast<int>(etas.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool failed = false;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (!failures[i].empty()) {
            std::cerr << "eta = " << format_double(etas[i]) << ": " << failures[i] << "\n";
            failed = true;
        }
    }
    if (failed) {
        if (!args.out.empty()) std::remove(args.out.c_str());
        return kNumerical;
    }

    if (cache) {
        for (const CurveRow& r : rows) cache->insert(r, hash);
        cache->save(args.cache);
    }

    std::string text;
    if (args.common.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const CurveRow& r : rows) arr.push_back(to_json(r));
        text = nlohmann::json{{"rows", arr}}.dump(2) + "\n";
    } else {
        text = curve_to_csv(rows);
    }
    if (args.out.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(args.out, text);
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_classic(double a, const CommonOptions& common) {
    if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("--a must be > 0");
    QuadratureSpec spec = make_spec(common);
    spec.rel_tol = std::min(spec.rel_tol, 1e-12);
    const double numeric = force_classic(a, spec);
    const double analytic = -kPi / (24.0 * a * a);
    const double rel = std::abs(numeric - analytic) / std::abs(analytic);
    const bool ok = rel <= 1e-8;
    if (common.json) {
        std::cout << nlohmann::json{{"a", a}, {"numeric", numeric}, {"analytic", analytic}, {"rel_diff", rel}, {"passed", ok}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "numeric   " << format_double(numeric) << "\n";
        std::cout << "analytic  " << format_double(analytic) << "  (-pi/(24 a^2))\n";
        std::cout << "rel diff  " << format_double(rel) << "\n";
    }
    return ok ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

int cmd_perturb(double a, double b, double k_min, const CommonOptions& common) {
    if (!(a > 0.0) || !(b >= 0.0) || !(k_min > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(k_min)) {
        throw UsageError("need --a > 0, --b >= 0 and --k-min > 0");
    }
    const QuadratureSpec spec = make_spec(common);
    const double f1 = force_perturbative(a, b, k_min, spec);
    const double f2 = force_perturbative(a, b, 0.5 * k_min, spec);
    const double predicted = a * b / (2.0 * kPi) * std::log(2.0);
    if (common.json) {
        std::cout << nlohmann::json{{"a", a},
                                    {"b", b},
                                    {"k_min", k_min},
                                    {"force_k_min", f1},
                                    {"force_half_k_min", f2},
                                    {"difference", f2 - f1},
                                    {"predicted_difference", predicted}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "k_min            " << format_double(k_min) << "   force " << format_double(f1) << "\n";
        std::cout << "k_min/2          " << format_double(0.5 * k_min) << "   force " << format_double(f2) << "\n";
        std::cout << "difference       " << format_double(f2 - f1) << "\n";
        std::cout << "a b ln2 / (2 pi) " << format_double(predicted) << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, bool json) {
    std::vector<CheckResult> checks;
    try {
        checks = run_suite(suite);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    bool all = true;
    for (const CheckResult& c : checks) all = all && c.passed;
    if (json) {
        std::cout << suite_to_json(suite, checks).dump(2) << "\n";
    } else {
        for (const CheckResult& c : checks) {
            std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  measured " << format_double(c.measured)
                      << "  tolerance " << format_double(c.tolerance) << "\n";
        }
        std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
    }
    return all ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

int cmd_plot(const std::string& in, const std::string& out, const std::string& x_scale, const std::string& y_scale) {
    if ((x_scale != "log" && x_scale != "lin") || (y_scale != "log" && y_scale != "lin")) {
        throw UsageError("axis scales must be log or lin");
    }
    std::vector<CurveRow> rows;
    SvgOptions opt;
    opt.log_x = x_scale == "log";
    opt.log_y = y_scale == "log";
    std::string svg;
    try {
        rows = curve_from_csv(read_file(in));
        svg = curve_to_svg(rows, opt);
    } catch (const FormatError& e) {
        throw UsageError(in + ": " + e.what());
    }
    write_file_atomic(out, svg);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir force on a Dirichlet plate in a linear potential"};
    app.require_subcommand(1);

    ExactArgs exact;
    CLI::App* c_exact = app.add_subcommand("exact", "Force coefficient f(eta) for one configuration");
    c_exact->add_option("--eta", exact.eta, "eta = b a^3");
    c_exact->add_option("--a", exact.a, "Plate height");
    c_exact->add_option("--b", exact.b, "Potential slope");
    c_exact->add_option("--hbar-c", exact.hbar_c, "Multiplier for T_xx (hbar c in the caller's units)");
    c_exact->add_option("--cache", exact.cache, "JSON result cache file");
    add_common(c_exact, exact.common);

    CurveArgs curve;
    CLI::App* c_curve = app.add_subcommand("curve", "f(eta) on a grid, as CSV (or JSON)");
    c_curve->add_option("--eta-min", curve.eta_min, "Smallest eta")->required();
    c_curve->add_option("--eta-max", curve.eta_max, "Largest eta")->required();
    c_curve->add_option("--points", curve.points, "Number of grid points")->required();
    c_curve->add_option("--spacing", curve.spacing, "log or lin");
    c_curve->add_option("--out", curve.out, "Output file (stdout if omitted)");
    c_curve->add_option("--jobs", curve.jobs, "Worker threads");
    c_curve->add_option("--cache", curve.cache, "JSON result cache file");
    add_common(c_curve, curve.common);

    double classic_a = 0.0;
    CommonOptions classic_common;
    CLI::App* c_classic = app.add_subcommand("classic", "Two-plate free-field force against -pi/(24 a^2)");
    c_classic->add_option("--a", classic_a, "Plate separation")->required();
    add_common(c_classic, classic_common);

    double p_a = 0.0, p_b = 0.0, p_kmin = 0.0;
    CommonOptions perturb_common;
    CLI::App* c_perturb = app.add_subcommand("perturb", "First-order force with an infrared cutoff");
    c_perturb->add_option("--a", p_a, "Plate height")->required();
    c_perturb->add_option("--b", p_b, "Potential slope")->required();
    c_perturb->add_option("--k-min", p_kmin, "Infrared cutoff")->required();
    add_common(c_perturb, perturb_common);

    std::string suite = "all";
    bool verify_json = false;
    CLI::App* c_verify = app.add_subcommand("verify", "Run invariant checks");
    c_verify->add_option("--suite", suite, "airy, greens, stress or all");
    c_verify->add_flag("--json", verify_json, "Machine-readable output");

    std::string plot_in, plot_out, x_scale = "log", y_scale = "log";
    CLI::App* c_plot = app.add_subcommand("plot", "SVG chart of a curve CSV");
    c_plot->add_option("--in", plot_in, "Curve CSV")->required();
    c_plot->add_option("--out", plot_out, "SVG file")->required();
    c_plot->add_option("--x-scale", x_scale, "log or lin");
    c_plot->add_option("--y-scale", y_scale, "log or lin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (c_exact->parsed()) return cmd_exact(exact);
        if (c_curve->parsed()) return cmd_curve(curve);
        if (c_classic->parsed()) return cmd_classic(classic_a, classic_common);
        if (c_perturb->parsed()) return cmd_perturb(p_a, p_b, p_kmin, perturb_common);
        if (c_verify->parsed()) return cmd_verify(suite, verify_json);
        if (c_plot->parsed()) return cmd_plot(plot_in, plot_out, x_scale, y_scale);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
