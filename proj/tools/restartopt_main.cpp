#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "restartopt/bounds.hpp"
#include "restartopt/chain.hpp"
#include "restartopt/errors.hpp"
#include "restartopt/experiments.hpp"
#include "restartopt/landscape.hpp"
#include "restartopt/profile.hpp"
#include "restartopt/profile_gen.hpp"
#include "restartopt/rate.hpp"

namespace {

using namespace restartopt;

struct Options {
    std::string profile_path;
    std::string landscape_path;
    double epsilon = 0.0;
    std::string mode = "a2";
    double p = 0.5;
    int grid = 512;
    std::uint64_t seed = 0;
    int a = 20;
    int b = 10;
    double c = 1000.0;
    std::string out;
    std::string format = "csv";
    double tol = 1e-10;
    std::string family;
    double param_from = 0.0;
    double param_to = 0.0;
    bool param_range_set = false;
    int n_landscapes = 100;
    std::int64_t runs = 100000;
    int n_max = -1;
};

RestartSetSpec spec_for(const std::string& mode) {
    const Mode m = mode_from_string(mode);
    if (m == Mode::G1) return RestartSetSpec::g1();
    if (m == Mode::A2) return RestartSetSpec::a2();
    throw InputError("general mode needs an explicit restart set; use a profile input");
}

// Profile from --profile, from --landscape (+epsilon/mode), or freshly
// generated from the seed and a/b/c dimensions.
LandscapeProfile resolve_profile(const Options& opt) {
    if (!opt.profile_path.empty()) return load_profile(opt.profile_path);
    if (!opt.landscape_path.empty()) {
        const DiscreteLandscape ls = DiscreteLandscape::load(opt.landscape_path, &std::cerr);
        return extract_profile(ls, opt.epsilon, spec_for(opt.mode));
    }
    FamilySpec spec;
    spec.family = Family::Random;
    spec.a = opt.a;
    spec.b = opt.b;
    spec.c = opt.c;
    spec.seed = opt.seed;
    spec.trap_split = Mode::A2;
    return random_profile(spec);
}

void write_text(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write to '" + out + "'");
    f << text << '\n';
}

void write_table(const ExperimentTable& table, const Options& opt) {
    if (!opt.out.empty()) {
        emit(table, opt.format, opt.out);
        return;
    }
    if (opt.format == "csv")
        emit_csv(table, std::cout);
    else if (opt.format == "json")
        emit_json(table, std::cout);
    else if (opt.format == "svg")
        emit_svg(table, std::cout);
    else
        throw InputError("unknown format '" + opt.format + "'");
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--profile", opt.profile_path, "profile JSON file");
    cmd->add_option("--landscape", opt.landscape_path, "landscape JSON file");
    cmd->add_option("--epsilon", opt.epsilon, "target level (must be an attained energy)");
    cmd->add_option("--mode", opt.mode, "g1, a2 or general");
    cmd->add_option("--p", opt.p, "randomization level");
    cmd->add_option("--grid", opt.grid, "grid size");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--a", opt.a, "max outside depth for generated profiles");
    cmd->add_option("--b", opt.b, "max well depth for generated profiles");
    cmd->add_option("--c", opt.c, "outside/inside mass ratio for generated profiles");
    cmd->add_option("--out", opt.out, "output path (stdout when omitted)");
    cmd->add_option("--format", opt.format, "csv, json or svg");
    cmd->add_option("--tol", opt.tol, "optimizer tolerance");
}

int run(int argc, char** argv) {
    CLI::App app{"convergence rates of stochastic restart optimization"};
    app.require_subcommand(1);
    Options opt;

    auto* cmd_xi = app.add_subcommand("xi-crit", "critical exponent at one design point");
    add_common(cmd_xi, opt);
    cmd_xi->callback([&] {
        const LandscapeProfile prof = resolve_profile(opt);
        AlgorithmConfig config{mode_from_string(opt.mode), opt.p};
        if (config.mode == Mode::G1) config.p = 1.0;
        write_text(rate_result_to_json(xi_crit(config, prof)), opt.out);
    });

    auto* cmd_curve = app.add_subcommand("rate-curve", "xi_crit across the p grid");
    add_common(cmd_curve, opt);
    cmd_curve->callback([&] {
        write_table(run_rate_curve(resolve_profile(opt), opt.grid), opt);
    });

    auto* cmd_best = app.add_subcommand("p-best", "best design point over A2 and G1");
    add_common(cmd_best, opt);
    cmd_best->callback([&] {
        const PBestResult r = find_p_best(resolve_profile(opt), opt.grid, opt.tol);
        nlohmann::json j;
        j["p_best"] = r.p_best;
        j["chosen"] = to_string(r.chosen);
        j["xi"] = r.xi;
        write_text(j.dump(), opt.out);
    });

    auto* cmd_phase = app.add_subcommand("phase-transition",
                                         "rate mean/variance over random landscapes");
    add_common(cmd_phase, opt);
    cmd_phase->add_option("--n", opt.n_landscapes, "number of random landscapes");
    cmd_phase->callback([&] {
        FamilySpec base;
        base.a = opt.a;
        base.b = opt.b;
        base.c = opt.c;
        const int grid = cmd_phase->count("--grid") ? opt.grid : 64;
        write_table(run_phase_transition(opt.n_landscapes, grid, opt.seed, base), opt);
    });

    auto* cmd_sweep = app.add_subcommand("family-sweep", "p_best across a parametric family");
    add_common(cmd_sweep, opt);
    cmd_sweep->add_option("--family", opt.family, "exponential, polynomial or logarithmic")
        ->required();
    auto* from_opt = cmd_sweep->add_option("--param-from", opt.param_from,
                                           "first parameter value");
    auto* to_opt = cmd_sweep->add_option("--param-to", opt.param_to,
                                         "last parameter value");
    cmd_sweep->callback([&] {
        const Family fam = family_from_string(opt.family);
        const int points = cmd_sweep->count("--grid") ? opt.grid : 32;
        std::vector<double> grid;
        if (from_opt->count() || to_opt->count()) {
            if (!(from_opt->count() && to_opt->count()))
                throw InputError("--param-from and --param-to go together");
            grid.resize(points);
            for (int i = 0; i < points; ++i)
                grid[i] = opt.param_from +
                          (opt.param_to - opt.param_from) * i / (points - 1);
        } else {
            grid = default_param_grid(fam, points);
        }
        write_table(run_family_sweep(fam, grid, opt.a, opt.b, opt.c), opt);
    });

    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo hitting times on a landscape");
    add_common(cmd_sim, opt);
    cmd_sim->add_option("--runs", opt.runs, "number of trajectories");
    cmd_sim->add_option("--nmax", opt.n_max, "survival cap (default from the oracle)");
    cmd_sim->callback([&] {
        if (opt.landscape_path.empty()) throw InputError("simulate needs --landscape");
        const DiscreteLandscape ls = DiscreteLandscape::load(opt.landscape_path, &std::cerr);
        AlgorithmConfig config{mode_from_string(opt.mode), opt.p};
        if (config.mode == Mode::G1) config.p = 1.0;
        const RestartKernel kernel = build_kernel(ls, config, opt.epsilon);
        TailEstimate est;
        if (opt.n_max > 0) {
            est.exact_log_rho = exact_tail_exponent(kernel);
            est.n_runs = opt.runs;
            const SurvivalCurve curve =
                simulate_tau(kernel, kernel.restart_dist, opt.runs, opt.seed, opt.n_max);
            est.mc_exponent = fit_tail_exponent(curve);
            est.fit_lo = 0;
            est.fit_hi = curve.max_n();
            if (!opt.out.empty()) {
                std::ofstream f(opt.out);
                if (!f) throw InputError("cannot write to '" + opt.out + "'");
                survival_to_csv(curve, f);
            }
        } else {
            est = estimate_tail(kernel, opt.runs, opt.seed);
            if (!opt.out.empty()) {
                const int cap = std::isfinite(est.exact_log_rho) && est.exact_log_rho < 0.0
                                    ? static_cast<int>(std::ceil(50.0 / -est.exact_log_rho))
                                    : 10000;
                const SurvivalCurve curve =
                    simulate_tau(kernel, kernel.restart_dist, opt.runs, opt.seed, cap);
                std::ofstream f(opt.out);
                if (!f) throw InputError("cannot write to '" + opt.out + "'");
                survival_to_csv(curve, f);
            }
        }
        std::cout << tail_estimate_to_json(est) << '\n';
    });

    auto* cmd_bounds = app.add_subcommand("bounds-constants",
                                          "universal two-sided rate-bound constants");
    add_common(cmd_bounds, opt);
    cmd_bounds->callback([&] { write_text(bound_constants_to_json(bound_constants()), opt.out); });

    auto* cmd_extract = app.add_subcommand(
        "extract-profile", "depth-mass profile of a landscape, or a generated one");
    add_common(cmd_extract, opt);
    cmd_extract->add_option("--family", opt.family,
                            "generate instead: random, exponential, polynomial or logarithmic");
    cmd_extract->add_option("--steepness", opt.param_from, "family parameter");
    cmd_extract->callback([&] {
        if (!opt.landscape_path.empty()) {
            const DiscreteLandscape ls =
                DiscreteLandscape::load(opt.landscape_path, &std::cerr);
            write_text(profile_to_json(extract_profile(ls, opt.epsilon, spec_for(opt.mode))),
                       opt.out);
            return;
        }
        FamilySpec spec;
        spec.family = opt.family.empty() ? Family::Random : family_from_string(opt.family);
        spec.steepness = cmd_extract->count("--steepness") ? opt.param_from : 1.0;
        spec.a = opt.a;
        spec.b = opt.b;
        spec.c = opt.c;
        spec.seed = opt.seed;
        spec.trap_split = mode_from_string(opt.mode);
        const LandscapeProfile prof = spec.family == Family::Random
                                          ? random_profile(spec)
                                          : parametric_profile(spec);
        write_text(profile_to_json(prof), opt.out);
    });

    auto* cmd_depth = app.add_subcommand("critical-depth", "escape-barrier difficulty");
    add_common(cmd_depth, opt);
    cmd_depth->callback([&] {
        if (opt.landscape_path.empty()) throw InputError("critical-depth needs --landscape");
        const DiscreteLandscape ls = DiscreteLandscape::load(opt.landscape_path, &std::cerr);
        write_text(critical_depth_to_json(critical_depth(ls)), opt.out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const restartopt::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const restartopt::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
