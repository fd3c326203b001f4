// Command-line driver: figure data, the Maurey construction pipeline,
// determinant-bound sweeps, the experiments scatter, and the invariant
// selftest. Every command is deterministic given its config and inputs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asbarron/activation.hpp"
#include "asbarron/detbounds.hpp"
#include "asbarron/experiments.hpp"
#include "asbarron/io.hpp"
#include "asbarron/measure.hpp"
#include "asbarron/network.hpp"
#include "asbarron/parallel.hpp"
#include "asbarron/rng.hpp"
#include "asbarron/selftest.hpp"

namespace {

using asb::Complex;
using asb::format_double;
using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279;

/// Binds a JSON config file to CLI11 options: flags that were passed on the
/// command line win; unknown config keys are hard errors.
class ConfigBinder {
public:
    void bind(const std::string& key, CLI::Option* opt, std::function<void(const json&)> set) {
        entries_[key] = {opt, std::move(set)};
    }

    void apply(const std::string& path) const {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw asb::InputError("cannot open config " + path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw asb::InputError(path + ": " + e.what());
        }
        if (!j.is_object()) throw asb::InputError(path + ": config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                throw asb::InputError(path + ": unknown config key \"" + key + "\"");
            if (it->second.first->count() == 0) it->second.second(value);
        }
    }

private:
    std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> entries_;
};

template <typename T>
void bind_scalar(ConfigBinder& b, const std::string& key, CLI::Option* opt, T& field) {
    b.bind(key, opt, [&field, key](const json& v) {
        try {
            field = v.get<T>();
        } catch (const json::exception&) {
            throw asb::InputError("config key \"" + key + "\": wrong type");
        }
    });
}

void bind_vector(ConfigBinder& b, const std::string& key, CLI::Option* opt,
                 std::vector<double>& field) {
    b.bind(key, opt, [&field, key](const json& v) {
        if (!v.is_array()) throw asb::InputError("config key \"" + key + "\": expected array");
        field.clear();
        for (const auto& e : v) field.push_back(e.get<double>());
    });
}

Eigen::MatrixXd random_wave(int n, int d, std::uint64_t seed) {
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = asb::rng::normal(seed, 0, static_cast<std::uint64_t>(i) * d + j);
    return m;
}

// ---------------------------------------------------------------- fig1

struct Fig1Params {
    std::string out = "fig1.csv";
    std::vector<double> gammas = {0.25, 0.5, 1.0, 2.0};
    double y_min = -10.0;
    double y_max = 10.0;
    int points = 2001;
};

void run_fig1(const Fig1Params& p) {
    if (p.points < 2) throw asb::InputError("fig1: points must be >= 2");
    if (!(p.y_max > p.y_min)) throw asb::InputError("fig1: need y_max > y_min");
    if (p.gammas.empty()) throw asb::InputError("fig1: gamma list is empty");
    for (double g : p.gammas)
        if (!(g > 0.0)) throw asb::InputError("fig1: gammas must be positive");
    asb::CsvWriter csv(p.out, {"y", "gamma", "highpass_relu"});
    for (double g : p.gammas)
        for (int i = 0; i < p.points; ++i) {
            const double y = p.y_min + (p.y_max - p.y_min) * i / (p.points - 1);
            csv.row(std::vector<double>{y, g, asb::highpass_relu(y, g)});
        }
}

// ---------------------------------------------------------------- fig2

struct Fig2Params {
    std::string out = "fig2.csv";
    int n = 4;
    int d = 1;
    std::uint64_t seed = 1;
    double theta_max = 8.0;
    int points = 801;
};

void run_fig2(const Fig2Params& p) {
    if (p.n < 1 || p.d < 1) throw asb::InputError("fig2: n, d must be >= 1");
    if (p.points < 2) throw asb::InputError("fig2: points must be >= 2");
    if (!(p.theta_max > 0.0)) throw asb::InputError("fig2: theta_max must be positive");
    Eigen::MatrixXd m = random_wave(p.n, p.d, p.seed);
    m /= m.lpNorm<Eigen::Infinity>();
    std::vector<double> grid(p.points);
    for (int i = 0; i < p.points; ++i) grid[i] = p.theta_max * i / (p.points - 1);
    asb::CsvWriter csv(p.out, {"theta", "norm_sq"});
    for (const auto& [theta, value] : asb::norm_curve(asb::WaveMatrix(m), grid))
        csv.row(std::vector<double>{theta, value});
}

// ---------------------------------------------------------------- construct

struct ConstructParams {
    std::string measure_path;
    std::string out_sum;
    std::string out_report;
    int m = 64;
    std::uint64_t seed = 1;
    long samples = 65536;
};

void run_construct(const ConstructParams& p) {
    if (p.measure_path.empty()) throw asb::InputError("construct: --measure is required");
    if (p.m < 1) throw asb::InputError("construct: m must be >= 1");
    if (p.samples < 2) throw asb::InputError("construct: samples must be >= 2");
    const asb::BarronMeasure raw = asb::load_measure(p.measure_path);
    if (raw.atoms.empty()) throw asb::InputError("construct: measure has no atoms");
    const asb::BarronMeasure rho = asb::canonicalize(raw, asb::CanonicalNorm::LInf);
    const int n = rho.n, d = rho.d;
    const double gamma = 0.5 / std::sqrt(static_cast<double>(d));

    asb::ComplexMeasureSpec mu;
    mu.base = rho;
    mu.gamma = gamma;
    const asb::SlaterSum psi_m = asb::maurey_sample(mu, p.m, p.seed);
    if (!p.out_sum.empty()) asb::save_slater_sum(p.out_sum, psi_m);

    const double scale = 1.0; // psi = AS f_rho, already in the envelope space
    auto psi = [&rho, scale](const asb::Configuration& x) {
        return asb::antisymmetrize_pointwise(
                   [&rho](const asb::Configuration& y) {
                       return Complex(asb::evaluate_f_rho(rho, y, asb::Activation::Relu), 0.0);
                   },
                   x) *
               scale;
    };
    auto approx = [&psi_m](const asb::Configuration& x) { return asb::slater_sum_eval(psi_m, x); };
    const asb::McEstimate err =
        asb::mc_l2_distance(psi, approx, n, d, static_cast<std::size_t>(p.samples), p.seed + 99);

    const double c_const = 2.0 * std::sqrt(static_cast<double>(d)) / kPi;
    const double maurey_rhs = asb::phi(rho) * c_const / std::sqrt(static_cast<double>(p.m));
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::string gap_note;
    try {
        gap = asb::infrared_gap_bound(rho, gamma);
    } catch (const std::exception& e) {
        gap_note = e.what();
    }

    std::ostringstream report;
    report << "measure: " << p.measure_path << "\n"
           << "n=" << n << " d=" << d << " atoms=" << rho.atoms.size() << " m=" << p.m
           << " gamma=" << format_double(gamma) << "\n"
           << "phi(rho) = " << format_double(asb::phi(rho)) << "\n"
           << "|mu| (Eq. TV bound)  = " << format_double(asb::total_variation(mu)) << "\n"
           << "sampling mass        = " << format_double(asb::sampling_mass(mu)) << "\n"
           << "error |psi_m - psi|  = " << format_double(err.estimate) << " +- "
           << format_double(err.std_error) << " (MC, " << p.samples << " samples)\n"
           << "Maurey right side phi*C/sqrt(m) = " << format_double(maurey_rhs) << "\n";
    if (gap_note.empty())
        report << "infrared truncation bound       = " << format_double(gap) << "\n"
               << "total right side                = " << format_double(maurey_rhs + gap) << "\n";
    else
        report << "infrared truncation bound unavailable: " << gap_note << "\n";
    std::cout << report.str();
    if (!p.out_report.empty()) {
        std::ofstream out(p.out_report, std::ios::binary);
        if (!out) throw asb::InputError("cannot write " + p.out_report);
        out << report.str();
    }
    if (!std::isfinite(err.estimate))
        throw asb::NumericalError("construct: non-finite error estimate");
}

// ---------------------------------------------------------------- bounds

struct BoundsParams {
    std::string out = "bounds.csv";
    std::vector<double> ns = {20, 30, 40};
    std::vector<double> ds = {1, 2};
    std::uint64_t seed = 1;
};

void run_bounds(const BoundsParams& p) {
    asb::CsvWriter csv(p.out, {"n", "d", "p", "w_inf", "log_det", "log_bound", "margin", "error"});
    for (double dn : p.ns)
        for (double dd : p.ds) {
            const int n = static_cast<int>(dn), d = static_cast<int>(dd);
            const double gamma = 0.5 / std::sqrt(static_cast<double>(d));
            for (const double w_inf : {0.05, 0.1, 0.2, gamma / 2.0}) {
                std::vector<std::string> row = {std::to_string(n), std::to_string(d),
                                                "",               format_double(w_inf),
                                                "",               "",
                                                "",               ""};
                try {
                    const auto pp = asb::admissible_p(n, d);
                    if (!pp)
                        throw asb::CapabilityError(
                            "infeasible: no p with p! >= 4n^2 and binom(p+d-1,d) <= n/2");
                    Eigen::MatrixXd m = random_wave(n, d, p.seed + 17 * n + d);
                    m *= w_inf / m.lpNorm<Eigen::Infinity>();
                    const asb::DetBoundReport r = asb::detbound_check(asb::WaveMatrix(m), *pp);
                    row[2] = std::to_string(*pp);
                    row[4] = format_double(r.log_det);
                    row[5] = format_double(r.log_bound);
                    row[6] = format_double(r.margin);
                    if (!r.ok) row[7] = "negative margin";
                } catch (const std::exception& e) {
                    row[7] = e.what();
                }
                csv.row(row);
            }
        }
}

// ---------------------------------------------------------------- scatter

struct ScatterParams {
    std::string out = "scatter.csv";
    int n = 4;
    int d = 1;
    int m = 64;
    std::vector<double> centers = {-0.5, 0.0, 0.5};
    std::vector<double> halfwidths = {2.0, 3.0, 4.0};
    asb::TrainConfig train;
};

std::vector<asb::HermiteTarget> scatter_targets(const ScatterParams& p) {
    std::vector<asb::HermiteTarget> targets;
    for (double hw : p.halfwidths)
        for (double c : p.centers) {
            asb::HermiteTarget t;
            t.n = p.n;
            t.d = p.d;
            t.orbitals = asb::ground_state_orbitals(p.n, p.d);
            asb::Window w;
            w.center = Eigen::VectorXd::Constant(p.d, c);
            w.halfwidth = hw;
            t.window = w;
            targets.push_back(std::move(t));
        }
    return targets;
}

void run_scatter(const ScatterParams& p) {
    if (p.centers.empty() || p.halfwidths.empty())
        throw asb::InputError("scatter: empty window grid");
    const auto rows = asb::theorem_scatter(scatter_targets(p), p.m, p.train);
    asb::CsvWriter csv(p.out, {"window_center", "window_halfwidth", "ab_norm_estimate",
                               "epsilon_achieved", "slater_fit_error", "opacity", "error"});
    for (const auto& r : rows)
        csv.row({format_double(r.window_center), format_double(r.window_halfwidth),
                 format_double(r.ab_norm_estimate), format_double(r.epsilon_achieved),
                 format_double(r.slater_fit_error), format_double(r.opacity), r.error});
}

// ---------------------------------------------------------------- norm

struct NormParams {
    std::string out = "norm.csv";
    std::string log_path;
    std::string target = "ground"; // ground | zero
    int n = 2;
    int d = 1;
    double center = 0.0;
    double halfwidth = 0.0; // 0 = no window
    asb::TrainConfig train;
};

void run_norm(const NormParams& p) {
    std::function<double(const asb::Configuration&)> target;
    if (p.target == "zero") {
        target = [](const asb::Configuration&) { return 0.0; };
    } else if (p.target == "ground") {
        asb::HermiteTarget t;
        t.n = p.n;
        t.d = p.d;
        t.orbitals = asb::ground_state_orbitals(p.n, p.d);
        if (p.halfwidth > 0.0) {
            asb::Window w;
            w.center = Eigen::VectorXd::Constant(p.d, p.center);
            w.halfwidth = p.halfwidth;
            t.window = w;
        }
        target = [t](const asb::Configuration& x) { return asb::target_eval(t, x); };
    } else {
        throw asb::InputError("norm: target must be \"ground\" or \"zero\"");
    }
    asb::TrainConfig cfg = p.train;
    std::ofstream log;
    if (!p.log_path.empty()) {
        log.open(p.log_path, std::ios::binary);
        if (!log) throw asb::InputError("cannot write " + p.log_path);
        cfg.log = &log;
    }
    const asb::AbNormResult r = asb::estimate_ab_norm(target, p.n, p.d, cfg);
    asb::CsvWriter csv(p.out, {"estimate", "residual", "converged"});
    csv.row({format_double(r.estimate), format_double(r.residual), r.converged ? "1" : "0"});
    std::cout << "estimate=" << format_double(r.estimate)
              << " residual=" << format_double(r.residual)
              << " converged=" << (r.converged ? "yes" : "no") << "\n";
    if (!r.converged)
        std::cerr << "warning: residual penalty did not converge within the step budget; "
                     "the estimate is a flagged upper bound only\n";
}

// ---------------------------------------------------------------- selftest

int run_selftest_cmd() {
    const auto results = asb::run_selftest();
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name
                  << std::string(width - r.name.size() + 2, ' ') << r.detail << "\n";
    }
    std::cout << (all ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
    return all ? 0 : 2;
}

void add_train_options(CLI::App* cmd, ConfigBinder& binder, asb::TrainConfig& t) {
    bind_scalar(binder, "epsilon", cmd->add_option("--epsilon", t.epsilon, "residual hinge level"),
                t.epsilon);
    bind_scalar(binder, "lambda", cmd->add_option("--lambda", t.lambda, "weight-norm penalty"),
                t.lambda);
    bind_scalar(binder, "steps", cmd->add_option("--steps", t.steps, "SGD steps"), t.steps);
    bind_scalar(binder, "batch", cmd->add_option("--batch", t.batch, "minibatch size"), t.batch);
    bind_scalar(binder, "learning_rate",
                cmd->add_option("--learning-rate", t.learning_rate, "initial step size"),
                t.learning_rate);
    bind_scalar(binder, "seed", cmd->add_option("--seed", t.seed, "RNG seed"), t.seed);
    bind_scalar(binder, "restarts", cmd->add_option("--restarts", t.restarts, "training restarts"),
                t.restarts);
    bind_scalar(binder, "hidden_width",
                cmd->add_option("--hidden-width", t.hidden_width, "network width"), t.hidden_width);
    bind_scalar(binder, "pool_samples",
                cmd->add_option("--pool-samples", t.pool_samples, "residual sample pool"),
                t.pool_samples);
    bind_scalar(binder, "fit_steps",
                cmd->add_option("--fit-steps", t.fit_steps, "Slater-fit descent steps"),
                t.fit_steps);
    bind_scalar(binder, "fit_samples",
                cmd->add_option("--fit-samples", t.fit_samples, "Slater-fit sample count"),
                t.fit_samples);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sums-of-Slater approximation toolkit: builds, evaluates, and certifies "
                 "plane-wave Slater approximations of anti-symmetric ridge expansions"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = logical cores)");

    Fig1Params f1;
    std::string f1_config;
    ConfigBinder f1_binder;
    auto* fig1 = app.add_subcommand("fig1", "high-passed ReLU curves as CSV");
    fig1->add_option("--config", f1_config, "JSON config file (flags override)");
    bind_scalar(f1_binder, "out", fig1->add_option("--out", f1.out, "output CSV path"), f1.out);
    bind_vector(f1_binder, "gammas", fig1->add_option("--gammas", f1.gammas, "cutoff list"),
                f1.gammas);
    bind_scalar(f1_binder, "y_min", fig1->add_option("--y-min", f1.y_min, "grid start"), f1.y_min);
    bind_scalar(f1_binder, "y_max", fig1->add_option("--y-max", f1.y_max, "grid end"), f1.y_max);
    bind_scalar(f1_binder, "points", fig1->add_option("--points", f1.points, "grid points"),
                f1.points);

    Fig2Params f2;
    std::string f2_config;
    ConfigBinder f2_binder;
    auto* fig2 = app.add_subcommand("fig2", "Slater norm decay along a random direction");
    fig2->add_option("--config", f2_config, "JSON config file (flags override)");
    bind_scalar(f2_binder, "out", fig2->add_option("--out", f2.out, "output CSV path"), f2.out);
    bind_scalar(f2_binder, "n", fig2->add_option("--n", f2.n, "particle count"), f2.n);
    bind_scalar(f2_binder, "d", fig2->add_option("--d", f2.d, "space dimension"), f2.d);
    bind_scalar(f2_binder, "seed", fig2->add_option("--seed", f2.seed, "RNG seed"), f2.seed);
    bind_scalar(f2_binder, "theta_max",
                fig2->add_option("--theta-max", f2.theta_max, "grid end"), f2.theta_max);
    bind_scalar(f2_binder, "points", fig2->add_option("--points", f2.points, "grid points"),
                f2.points);

    ConstructParams cp;
    std::string cp_config;
    ConfigBinder cp_binder;
    auto* construct = app.add_subcommand(
        "construct", "Maurey-sample a Slater sum from a measure file and certify the error");
    construct->add_option("--config", cp_config, "JSON config file (flags override)");
    bind_scalar(cp_binder, "measure",
                construct->add_option("--measure", cp.measure_path, "measure JSON file"),
                cp.measure_path);
    bind_scalar(cp_binder, "out_sum",
                construct->add_option("--out-sum", cp.out_sum, "Slater sum output JSON"),
                cp.out_sum);
    bind_scalar(cp_binder, "out_report",
                construct->add_option("--out-report", cp.out_report, "report output path"),
                cp.out_report);
    bind_scalar(cp_binder, "m", construct->add_option("--m", cp.m, "number of determinants"),
                cp.m);
    bind_scalar(cp_binder, "seed", construct->add_option("--seed", cp.seed, "RNG seed"), cp.seed);
    bind_scalar(cp_binder, "samples",
                construct->add_option("--samples", cp.samples, "Monte Carlo samples"), cp.samples);

    BoundsParams bp;
    std::string bp_config;
    ConfigBinder bp_binder;
    auto* bounds = app.add_subcommand("bounds", "determinant-bound sweep as CSV");
    bounds->add_option("--config", bp_config, "JSON config file (flags override)");
    bind_scalar(bp_binder, "out", bounds->add_option("--out", bp.out, "output CSV path"), bp.out);
    bind_vector(bp_binder, "ns", bounds->add_option("--ns", bp.ns, "particle counts"), bp.ns);
    bind_vector(bp_binder, "ds", bounds->add_option("--ds", bp.ds, "dimensions"), bp.ds);
    bind_scalar(bp_binder, "seed", bounds->add_option("--seed", bp.seed, "RNG seed"), bp.seed);

    ScatterParams sp;
    std::string sp_config;
    ConfigBinder sp_binder;
    auto* scatter =
        app.add_subcommand("scatter", "norm-estimate vs fit-error scatter over windows");
    scatter->add_option("--config", sp_config, "JSON config file (flags override)");
    bind_scalar(sp_binder, "out", scatter->add_option("--out", sp.out, "output CSV path"), sp.out);
    bind_scalar(sp_binder, "n", scatter->add_option("--n", sp.n, "particle count"), sp.n);
    bind_scalar(sp_binder, "d", scatter->add_option("--d", sp.d, "space dimension"), sp.d);
    bind_scalar(sp_binder, "m", scatter->add_option("--m", sp.m, "determinant count"), sp.m);
    bind_vector(sp_binder, "centers",
                scatter->add_option("--centers", sp.centers, "window centers"), sp.centers);
    bind_vector(sp_binder, "halfwidths",
                scatter->add_option("--halfwidths", sp.halfwidths, "window halfwidths"),
                sp.halfwidths);
    add_train_options(scatter, sp_binder, sp.train);

    NormParams np;
    std::string np_config;
    ConfigBinder np_binder;
    auto* norm = app.add_subcommand("norm", "penalized-SGD smooth-norm estimate");
    norm->add_option("--config", np_config, "JSON config file (flags override)");
    bind_scalar(np_binder, "out", norm->add_option("--out", np.out, "output CSV path"), np.out);
    bind_scalar(np_binder, "log", norm->add_option("--log", np.log_path, "training log path"),
                np.log_path);
    bind_scalar(np_binder, "target",
                norm->add_option("--target", np.target, "target: ground | zero"), np.target);
    bind_scalar(np_binder, "n", norm->add_option("--n", np.n, "particle count"), np.n);
    bind_scalar(np_binder, "d", norm->add_option("--d", np.d, "space dimension"), np.d);
    bind_scalar(np_binder, "center", norm->add_option("--center", np.center, "window center"),
                np.center);
    bind_scalar(np_binder, "halfwidth",
                norm->add_option("--halfwidth", np.halfwidth, "window halfwidth (0 = none)"),
                np.halfwidth);
    add_train_options(norm, np_binder, np.train);

    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        asb::set_thread_count(threads);
        if (fig1->parsed()) {
            f1_binder.apply(f1_config);
            run_fig1(f1);
        } else if (fig2->parsed()) {
            f2_binder.apply(f2_config);
            run_fig2(f2);
        } else if (construct->parsed()) {
            cp_binder.apply(cp_config);
            run_construct(cp);
        } else if (bounds->parsed()) {
            bp_binder.apply(bp_config);
            run_bounds(bp);
        } else if (scatter->parsed()) {
            sp_binder.apply(sp_config);
            run_scatter(sp);
        } else if (norm->parsed()) {
            np_binder.apply(np_config);
            run_norm(np);
        } else if (selftest->parsed()) {
            return run_selftest_cmd();
        }
    } catch (const asb::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
