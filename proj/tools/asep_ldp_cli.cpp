// Command-line surface: exact rate functions, verification suites, and the
// Monte Carlo / Fredholm cross-checks, all reproducible from a recorded seed.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asepldp/estimator.hpp"
#include "asepldp/exact_rates.hpp"
#include "asepldp/fredholm.hpp"
#include "asepldp/qfunctions.hpp"
#include "asepldp/quadrature.hpp"
#include "asepldp/report.hpp"
#include "asepldp/simulator.hpp"

using namespace asepldp;
namespace rp = asepldp::report;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
    double q = 0.7;
    uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    std::string format = "csv";
    std::string out;
    std::string config_path;
};

uint64_t draw_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--q", c.q, "asymmetry parameter in (1/2,1)");
    cmd->add_option("--seed", c.seed, "master RNG seed (drawn and recorded if absent)")
        ->each([&c](const std::string&) { c.seed_given = true; });
    cmd->add_option("--workers", c.workers, "worker threads for batches");
    cmd->add_option("--format", c.format, "stdout format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "output file prefix");
    cmd->add_option("--config", c.config_path, "key=value defaults file");
}

// config file < flags; returns the merged key/value map for the manifest
std::map<std::string, std::string> merge_config(const CommonOpts& c, CLI::App* cmd) {
    std::map<std::string, std::string> kv;
    if (!c.config_path.empty()) kv = rp::parse_config_file(c.config_path);
    for (const auto* opt : cmd->get_options()) {
        if (opt->count() > 0 && !opt->get_name().empty() && opt->get_name()[0] == '-') {
            std::string name = opt->get_name();
            while (!name.empty() && name[0] == '-') name.erase(0, 1);
            if (!opt->results().empty()) kv[name] = opt->results().front();
        }
    }
    return kv;
}

void apply_config_defaults(CommonOpts& c, CLI::App* cmd) {
    if (c.config_path.empty()) return;
    const auto kv = rp::parse_config_file(c.config_path);
    auto set_if_unset = [&](const char* key, auto& field) {
        if (kv.count(key) && cmd->get_option(std::string("--") + key)->count() == 0) {
            std::istringstream is(kv.at(key));
            is >> field;
        }
    };
    set_if_unset("q", c.q);
    set_if_unset("workers", c.workers);
    if (kv.count("format") && cmd->get_option("--format")->count() == 0)
        c.format = kv.at("format");
    if (kv.count("seed") && !c.seed_given) {
        c.seed = std::stoull(kv.at("seed"));
        c.seed_given = true;
    }
}

void finalize_seed(CommonOpts& c) {
    if (!c.seed_given) c.seed = draw_seed();
}

int env_workers_default() {
    if (const char* env = std::getenv("ASEP_LDP_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

// removes written files if a later step throws
class OutputGuard {
  public:
    ~OutputGuard() {
        if (!armed_) return;
        for (const auto& p : paths_) std::filesystem::remove(p);
    }
    void track(const std::string& p) { paths_.push_back(p); }
    void disarm() { armed_ = false; }

  private:
    std::vector<std::string> paths_;
    bool armed_ = true;
};

void write_file(const std::string& path, const std::string& content,
                OutputGuard& guard) {
    guard.track(path);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

void write_manifest(const CommonOpts& c, const std::string& command,
                    const std::map<std::string, std::string>& params,
                    const std::vector<std::string>& outputs, OutputGuard& guard) {
    rp::RunManifest m;
    m.command = command;
    for (const auto& [k, v] : params) m.parameters.emplace_back(k, v);
    m.seed = c.seed;
    m.tool_version = rp::kToolVersion;
    m.cfg_hash = rp::config_hash(params);
    m.outputs = outputs;
    write_file(c.out + ".manifest.json", m.to_json(), guard);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("grid", "empty numeric list");
    return out;
}

rp::Json estimate_json(const char* what, const est::McEstimate& e, double exact) {
    const double z = e.std_error > 0.0 ? (e.mean - exact) / e.std_error : 0.0;
    return rp::Json(rp::Json::Object{
        {"inputs", rp::Json(what)},
        {"mean", rp::Json(e.mean)},
        {"stderr", rp::Json(e.std_error)},
        {"n", rp::Json(static_cast<int64_t>(e.n))},
        {"seed", rp::Json(e.seed)},
        {"exact_reference", rp::Json(exact)},
        {"z_score", rp::Json(z)},
    });
}

// ---------------------------------------------------------------- rates ----

int cmd_rates(CommonOpts& c, const std::string& y_grid, const std::string& s_grid,
              std::map<std::string, std::string> params) {
    if (y_grid.empty() == s_grid.empty()) {
        std::cerr << "rates: provide exactly one of --y or --s\n";
        return kExitUsage;
    }
    const ModelParams mp{c.q};
    rp::Json::Array rows;
    rp::CsvWriter csv(y_grid.empty()
                          ? std::vector<std::string>{"s", "h_q", "B_q"}
                          : std::vector<std::string>{"y", "phi_plus", "s_star",
                                                     "dual_value", "tasep_J_scaled"});
    if (!y_grid.empty()) {
        for (double y : parse_grid(y_grid)) {
            const auto r = rates::legendre_dual(mp, y);
            const double js = 0.25 * (1.0 - y) * rates::tasep_J(4.0 / (1.0 - y));
            csv.add_row({rp::format_double17(y), rp::format_double17(r.phi_plus),
                         rp::format_double17(r.s_star), rp::format_double17(r.dual_value),
                         rp::format_double17(js)});
            rows.push_back(rp::Json(rp::Json::Object{{"y", rp::Json(y)},
                                                     {"phi_plus", rp::Json(r.phi_plus)},
                                                     {"s_star", rp::Json(r.s_star)},
                                                     {"dual_value", rp::Json(r.dual_value)},
                                                     {"tasep_J_scaled", rp::Json(js)}}));
            if (y < 1e-12)
                std::cerr << "warning: y below 1e-12; series evaluation in effect\n";
        }
    } else {
        for (double s : parse_grid(s_grid)) {
            const double h = rates::h_q(mp, s);  // throws on s <= 0
            csv.add_row({rp::format_double17(s), rp::format_double17(h),
                         rp::format_double17(rates::B_q(mp, s))});
            rows.push_back(rp::Json(rp::Json::Object{
                {"s", rp::Json(s)},
                {"h_q", rp::Json(h)},
                {"B_q", rp::Json(rates::B_q(mp, s))}}));
        }
    }
    const rp::Json doc(rp::Json::Object{{"schema_version", rp::Json(rp::kSchemaVersion)},
                                        {"command", rp::Json("rates")},
                                        {"q", rp::Json(c.q)},
                                        {"rows", rp::Json(rows)}});
    if (c.format == "json")
        std::cout << doc.dump();
    else
        std::cout << csv.str();

    if (!c.out.empty()) {
        OutputGuard guard;
        write_file(c.out + ".json", doc.dump(), guard);
        write_file(c.out + ".csv", csv.str(), guard);
        write_manifest(c, "rates", params, {c.out + ".json", c.out + ".csv"}, guard);
        guard.disarm();
    }
    return kExitOk;
}

// ------------------------------------------------------------- lyapunov ----

int cmd_lyapunov(CommonOpts& c, double s, const std::string& t_grid, int64_t samples,
                 std::map<std::string, std::string> params) {
    const ModelParams mp{c.q};
    const auto rep =
        est::estimate_lyapunov(mp, s, parse_grid(t_grid), samples, c.seed, c.workers);

    rp::Json::Array per_t;
    rp::CsvWriter csv({"t", "empirical", "stderr", "exact", "n", "seed"});
    for (size_t i = 0; i < rep.t_grid.size(); ++i) {
        per_t.push_back(estimate_json("lyapunov", rep.empirical[i], rep.exact));
        csv.add_row({rp::format_double17(rep.t_grid[i]),
                     rp::format_double17(rep.empirical[i].mean),
                     rp::format_double17(rep.empirical[i].std_error),
                     rp::format_double17(rep.exact), std::to_string(samples),
                     std::to_string(c.seed)});
    }
    const rp::Json doc(rp::Json::Object{
        {"schema_version", rp::Json(rp::kSchemaVersion)},
        {"command", rp::Json("lyapunov")},
        {"q", rp::Json(c.q)},
        {"s", rp::Json(s)},
        {"exact", rp::Json(rep.exact)},
        {"extrapolated", rp::Json(rep.extrapolated)},
        {"log_t_coeff", rp::Json(rep.log_t_coeff)},
        {"intercept", rp::Json(rep.intercept)},
        {"per_t", rp::Json(per_t)},
    });
    OutputGuard guard;
    write_file(c.out + ".json", doc.dump(), guard);
    write_file(c.out + ".csv", csv.str(), guard);
    write_manifest(c, "lyapunov", params, {c.out + ".json", c.out + ".csv"}, guard);
    guard.disarm();
    std::printf("lyapunov: exact %.6g, extrapolated %.6g (rel %.2f%%)\n", rep.exact,
                rep.extrapolated,
                100.0 * std::fabs(rep.extrapolated - rep.exact) / std::fabs(rep.exact));
    return kExitOk;
}

// ----------------------------------------------------------------- tail ----

int cmd_tail(CommonOpts& c, double y, double t, int64_t samples,
             std::map<std::string, std::string> params) {
    const ModelParams mp{c.q};
    const auto e = est::estimate_tail(mp, y, t, samples, c.seed, c.workers);
    const double phi = (y > 0.0 && y < 1.0) ? rates::phi_plus(y) : 0.0;
    const double rate = e.mean > 0.0 ? -std::log(e.mean) / t
                                     : std::numeric_limits<double>::infinity();
    rp::Json::Object o{
        {"schema_version", rp::Json(rp::kSchemaVersion)},
        {"command", rp::Json("tail")},
        {"q", rp::Json(c.q)},
        {"y", rp::Json(y)},
        {"t", rp::Json(t)},
        {"estimate", estimate_json("tail", e, 0.0)},
        {"rate", rp::Json(rate)},
        {"phi_plus", rp::Json(phi)},
    };
    if (e.mean == 0.0) {
        o.emplace_back("zero_hit_upper_bound",
                       rp::Json(est::zero_hit_upper_bound(samples)));
        std::cerr << "warning: zero tail hits; one-sided 95% bound reported\n";
    }
    rp::CsvWriter csv({"y", "t", "p_hat", "stderr", "rate", "phi_plus"});
    csv.add_row({rp::format_double17(y), rp::format_double17(t),
                 rp::format_double17(e.mean), rp::format_double17(e.std_error),
                 rp::format_double17(rate), rp::format_double17(phi)});
    OutputGuard guard;
    write_file(c.out + ".json", rp::Json(std::move(o)).dump(), guard);
    write_file(c.out + ".csv", csv.str(), guard);
    write_manifest(c, "tail", params, {c.out + ".json", c.out + ".csv"}, guard);
    guard.disarm();
    std::printf("tail: p=%.6g rate=%.6g vs phi_plus=%.6g\n", e.mean, rate, phi);
    return kExitOk;
}

// ------------------------------------------------------------------ lpp ----

int cmd_lpp(CommonOpts& c, int N, double z, int64_t samples,
            std::map<std::string, std::string> params) {
    const auto e = est::lpp_tail(N, z, samples, c.seed, c.workers);
    const double rate = est::lpp_rate(N, e);
    const double J = rates::tasep_J(z);
    rp::Json::Object o{
        {"schema_version", rp::Json(rp::kSchemaVersion)},
        {"command", rp::Json("lpp")},
        {"N", rp::Json(N)},
        {"z", rp::Json(z)},
        {"estimate", estimate_json("lpp_tail", e, 0.0)},
        {"rate", rp::Json(rate)},
        {"tasep_J", rp::Json(J)},
    };
    if (e.mean == 0.0) {
        o.emplace_back("zero_hit_upper_bound",
                       rp::Json(est::zero_hit_upper_bound(samples)));
        std::cerr << "warning: zero tail hits; one-sided 95% bound reported\n";
    }
    rp::CsvWriter csv({"N", "z", "p_hat", "stderr", "rate", "tasep_J"});
    csv.add_row({std::to_string(N), rp::format_double17(z), rp::format_double17(e.mean),
                 rp::format_double17(e.std_error), rp::format_double17(rate),
                 rp::format_double17(J)});
    OutputGuard guard;
    write_file(c.out + ".json", rp::Json(std::move(o)).dump(), guard);
    write_file(c.out + ".csv", csv.str(), guard);
    write_manifest(c, "lpp", params, {c.out + ".json", c.out + ".csv"}, guard);
    guard.disarm();
    std::printf("lpp: p=%.6g rate=%.6g vs J(z)=%.6g\n", e.mean, rate, J);
    return kExitOk;
}

// --------------------------------------------------------- leading-term ----

int cmd_leading_term(CommonOpts& c, double s, const std::string& t_grid, double tol,
                     std::map<std::string, std::string> params) {
    const ModelParams mp{c.q};
    const FractionalOrder order{s};
    const double C0 = fredholm::steepest_descent_C0(mp, order, 0).real();

    rp::Json::Array rows;
    rp::CsvWriter csv({"t", "r", "C0", "rel_gap"});
    std::printf("leading-term: C0 = %.8f\n", C0);
    for (double t : parse_grid(t_grid)) {
        const auto lt = fredholm::LeadingTermParams::make(mp, order, t);
        const auto spec = fredholm::leading_term_contour(mp, order, t);
        const auto scaled = fredholm::leading_term_scaled(mp, lt, spec, tol);
        const double r = std::sqrt(t) * scaled.real();
        const double gap = std::fabs(r - C0) / C0;
        std::printf("  t=%-8g r=%.8f rel_gap=%.4f\n", t, r, gap);
        csv.add_row({rp::format_double17(t), rp::format_double17(r),
                     rp::format_double17(C0), rp::format_double17(gap)});
        rows.push_back(rp::Json(rp::Json::Object{
            {"t", rp::Json(t)}, {"r", rp::Json(r)}, {"rel_gap", rp::Json(gap)}}));
    }
    const rp::Json doc(rp::Json::Object{
        {"schema_version", rp::Json(rp::kSchemaVersion)},
        {"command", rp::Json("leading-term")},
        {"q", rp::Json(c.q)},
        {"s", rp::Json(s)},
        {"C0", rp::Json(C0)},
        {"rows", rp::Json(rows)},
    });
    OutputGuard guard;
    write_file(c.out + ".json", doc.dump(), guard);
    write_file(c.out + ".csv", csv.str(), guard);
    write_manifest(c, "leading-term", params, {c.out + ".json", c.out + ".csv"}, guard);
    guard.disarm();
    return kExitOk;
}

// --------------------------------------------------------------- verify ----

struct CheckSink {
    bool all_ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double budget_s;

    explicit CheckSink(double budget) : budget_s(budget) {}

    void operator()(const std::string& name, double measured, double tolerance) {
        const bool ok = measured <= tolerance;
        all_ok = all_ok && ok;
        std::printf("%-52s measured %.3e tol %.3e %s\n", name.c_str(), measured,
                    tolerance, ok ? "PASS" : "FAIL");
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (budget_s > 0.0 && elapsed > budget_s)
            throw QuadratureError("verify: budget exceeded");
    }
};

void verify_duality(const ModelParams& mp, CheckSink& check) {
    double worst = 0.0;
    for (double y = 0.05; y < 0.96; y += 0.05) {
        const auto r = rates::legendre_dual(mp, y);
        worst = std::max(worst, std::fabs(r.dual_value - r.phi_plus));
    }
    check("duality gap sup_y |phi - sup g|", worst, 1e-10);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(1e-3, 20.0);
    double worst_sub = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen), y = u(gen);
        const double lhs = rates::h_q(mp, x + y) - rates::h_q(mp, x) - rates::h_q(mp, y);
        worst_sub =
            std::max(worst_sub,
                     std::fabs(lhs - rates::h_q_subadditivity_deficit(mp, x, y)));
    }
    check("subadditivity deficit vs product form", worst_sub, 1e-12);

    double worst_max = 0.0;
    for (double y : {0.1, 0.25, 0.5, 0.8}) {
        const auto r = rates::legendre_dual(mp, y);
        double best_s = 0.0, best_g = -1e300;
        for (double sv = r.s_star - 1e-4; sv <= r.s_star + 1e-4; sv += 1e-8) {
            const double g = rates::dual_objective(mp, y, sv);
            if (g > best_g) {
                best_g = g;
                best_s = sv;
            }
        }
        worst_max = std::max(worst_max, std::fabs(best_s - r.s_star));
    }
    check("numeric argmax vs analytic maximizer", worst_max, 1e-6);
}

void verify_asymptotics(const ModelParams& mp, CheckSink& check) {
    check("phi ratio at 1e-6 vs 2/3",
          std::fabs(rates::phi_asymptotic_ratio(1e-6) - 2.0 / 3.0), 1e-3);
    double worst = 0.0;  // B_q decreasing at lag 10 on the log grid
    std::vector<double> vals(1000);
    for (int i = 0; i < 1000; ++i) {
        vals[i] = rates::B_q(mp, std::pow(10.0, -6.0 + 8.0 * i / 999.0));
        if (i >= 10 && vals[i] >= vals[i - 10]) worst = 1.0;
    }
    check("B_q monotone decreasing", worst, 0.0);
    double range_bad = 0.0;
    for (double s = 0.1; s < 60.0; s *= 1.7)
        if (!(rates::h_q(mp, s) > 0.0 && rates::h_q(mp, s) < mp.gamma)) range_bad = 1.0;
    check("h_q range (0, q-p)", range_bad, 0.0);
}

void verify_fredholm(const ModelParams& mp, double t, int64_t samples, uint64_t seed,
                     int workers, CheckSink& check) {
    for (double zeta : {0.5, 1.0, 2.0}) {
        const auto det = fredholm::fredholm_det_certified(mp, zeta, t, 1e-9);
        const auto mc =
            est::estimate_tau_laplace(mp, zeta, t, samples, seed, workers);
        std::ostringstream name;
        name << "tau-laplace determinant zeta=" << zeta << " (z-score)";
        const double z = std::fabs(mc.mean - det.value) / (mc.std_error + 1e-300);
        check(name.str(), std::fabs(mc.mean - det.value),
              3.0 * mc.std_error + 1e-6);
        (void)z;
    }
}

void verify_trace_derivative(const ModelParams& mp, CheckSink& check) {
    const auto spec = kernel::make_contour(mp, 0, 1.0);
    const double h = 1e-4;
    for (int n : {0, 1}) {
        const auto lhs = (fredholm::trace_Kn(mp, n, 1.0 + h, 1.0, spec) -
                          fredholm::trace_Kn(mp, n, 1.0 - h, 1.0, spec)) /
                         (2.0 * h);
        const auto rhs = fredholm::trace_Kn(mp, n + 1, 1.0, 1.0, spec);
        check("d/dzeta tr K^(" + std::to_string(n) + ") vs tr K^(" +
                  std::to_string(n + 1) + ")",
              std::abs(lhs - rhs), 1e-5);
    }
    const auto ep =
        fredholm::exterior_trace(fredholm::build_nystrom(mp, 0, 1.0 + h, 1.0, spec), 2);
    const auto em =
        fredholm::exterior_trace(fredholm::build_nystrom(mp, 0, 1.0 - h, 1.0, spec), 2);
    const auto d21 = fredholm::dzeta_exterior_trace(mp, 2, 1, 1.0, 1.0, spec);
    check("L=2 n=1 mixed integral vs finite difference",
          std::abs(d21 - (ep - em) / (2.0 * h)), 1e-5);
}

void verify_appendix(const ModelParams& mp, CheckSink& check) {
    (void)mp;
    double worst = 0.0;
    for (double y = 0.1; y <= 0.9 + 1e-12; y += 0.1)
        worst = std::max(worst, std::fabs(0.25 * (1.0 - y) *
                                              rates::tasep_J(4.0 / (1.0 - y)) -
                                          rates::phi_plus(y)));
    check("scaled J identity vs phi_plus", worst, 1e-10);

    double worst_gv = 0.0;
    for (double t : {4.5, 5.0, 6.0, 8.0, 12.0})
        worst_gv = std::max(worst_gv, std::fabs(rates::tasep_GV_integral(t, 1e-10) -
                                                rates::tasep_J(t)));
    check("integral route vs closed-form J", worst_gv, 1e-8);

    auto f = [](double th) {
        const double x = 4.0 * std::sin(th) * std::sin(th);
        return rates::mp_density(x) * 8.0 * std::sin(th) * std::cos(th);
    };
    const double total = integrate_adaptive(f, 1e-12, std::acos(0.0), 1e-12);
    check("equilibrium density normalization", std::fabs(total - 1.0), 1e-8);
}

int cmd_verify(CommonOpts& c, const std::string& suite, double t, int64_t samples,
               double budget) {
    const ModelParams mp{c.q};
    CheckSink check(budget);
    try {
        if (suite == "duality") {
            verify_duality(mp, check);
        } else if (suite == "asymptotics") {
            verify_asymptotics(mp, check);
        } else if (suite == "fredholm") {
            verify_fredholm(mp, t, samples, c.seed, c.workers, check);
        } else if (suite == "trace-derivative") {
            verify_trace_derivative(mp, check);
        } else if (suite == "appendix") {
            verify_appendix(mp, check);
        } else {
            std::cerr << "verify: unknown suite '" << suite << "'\n";
            return kExitUsage;
        }
    } catch (const QuadratureError& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return kExitNumerical;
    }
    return check.all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact rate functions, contour determinants and event-driven "
                 "exclusion sampling for the integrated current"};
    app.require_subcommand(1);

    CommonOpts c;
    c.workers = env_workers_default();

    // rates
    auto* rates_cmd = app.add_subcommand("rates", "evaluate the exact rate functions");
    std::string y_grid, s_grid;
    rates_cmd->add_option("--y", y_grid, "comma-separated y grid in (0,1)");
    rates_cmd->add_option("--s", s_grid, "comma-separated s grid, s > 0");
    add_common(rates_cmd, c);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a verification battery");
    std::string suite;
    double vt = 1.0;
    int64_t vsamples = 100000;
    double budget = 0.0;
    verify_cmd->add_option("suite", suite, "duality|asymptotics|fredholm|trace-derivative|appendix")
        ->required();
    verify_cmd->add_option("--t", vt, "time horizon for the determinant check");
    verify_cmd->add_option("--samples", vsamples, "Monte Carlo samples");
    verify_cmd->add_option("--budget", budget, "wall-clock budget in seconds");
    add_common(verify_cmd, c);

    // lyapunov
    auto* ly_cmd = app.add_subcommand("lyapunov", "exponent estimate across a t grid");
    double ly_s = 1.0;
    std::string ly_t = "10,20,40";
    int64_t ly_samples = 100000;
    ly_cmd->add_option("--s", ly_s, "moment order, s > 0");
    ly_cmd->add_option("--t", ly_t, "comma-separated t grid");
    ly_cmd->add_option("--samples", ly_samples, "samples per t");
    add_common(ly_cmd, c);

    // tail
    auto* tail_cmd = app.add_subcommand("tail", "upper-tail probability estimate");
    double tail_y = 0.2, tail_t = 20.0;
    int64_t tail_samples = 100000;
    tail_cmd->add_option("--y", tail_y, "deviation parameter in (0,1)");
    tail_cmd->add_option("--t", tail_t, "rate-function time scale");
    tail_cmd->add_option("--samples", tail_samples, "samples");
    add_common(tail_cmd, c);

    // lpp
    auto* lpp_cmd = app.add_subcommand("lpp", "last-passage tail estimate");
    int lpp_N = 40;
    double lpp_z = 4.5;
    int64_t lpp_samples = 100000;
    lpp_cmd->add_option("--N", lpp_N, "grid size");
    lpp_cmd->add_option("--z", lpp_z, "threshold per row, z >= 4");
    lpp_cmd->add_option("--samples", lpp_samples, "samples");
    add_common(lpp_cmd, c);

    // leading-term
    auto* lead_cmd = app.add_subcommand("leading-term", "saddle constant trend table");
    double lead_s = 1.0;
    std::string lead_t = "30,60,120";
    double lead_tol = 1e-7;
    lead_cmd->add_option("--s", lead_s, "moment order");
    lead_cmd->add_option("--t", lead_t, "comma-separated t grid");
    lead_cmd->add_option("--tol", lead_tol, "refinement tolerance");
    add_common(lead_cmd, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config_defaults(c, sub);
        finalize_seed(c);
        auto params = merge_config(c, sub);
        params["seed"] = std::to_string(c.seed);
        params["workers"] = std::to_string(c.workers);

        if (sub == rates_cmd) {
            if (c.out.empty()) c.out = "asep_rates";
            return cmd_rates(c, y_grid, s_grid, params);
        }
        if (sub == verify_cmd) return cmd_verify(c, suite, vt, vsamples, budget);
        if (sub == ly_cmd) {
            if (c.out.empty()) c.out = "asep_lyapunov";
            params["s"] = rp::format_double17(ly_s);
            return cmd_lyapunov(c, ly_s, ly_t, ly_samples, params);
        }
        if (sub == tail_cmd) {
            if (c.out.empty()) c.out = "asep_tail";
            return cmd_tail(c, tail_y, tail_t, tail_samples, params);
        }
        if (sub == lpp_cmd) {
            if (c.out.empty()) c.out = "asep_lpp";
            return cmd_lpp(c, lpp_N, lpp_z, lpp_samples, params);
        }
        if (sub == lead_cmd) {
            if (c.out.empty()) c.out = "asep_leading_term";
            return cmd_leading_term(c, lead_s, lead_t, lead_tol, params);
        }
        return kExitUsage;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
