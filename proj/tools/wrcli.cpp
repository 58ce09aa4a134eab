// Command-line driver for the waveform relaxation experiments.

#include "wr/errors.hpp"
#include "wr/harness/config.hpp"
#include "wr/harness/experiments.hpp"
#include "wr/harness/materials.hpp"
#include "wr/harness/plot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;
    std::map<std::string, std::string> overrides;
};

// Registers a flag whose value, when given, overrides `key` of the config.
void override_flag(CLI::App& app, Common& common, const std::string& flag, const std::string& key,
                   const std::string& help) {
    app.add_option_function<std::string>(
        flag, [&common, key](const std::string& v) { common.overrides[key] = v; }, help);
}

void add_common(CLI::App& app, Common& c) {
    app.add_option("--config", c.config_path, "experiment config file (INI)");
    app.add_option("--out", c.out_dir, "output directory")->capture_default_str();
    app.add_flag("--svg", c.svg, "also write an SVG plot next to the CSV");
    override_flag(app, c, "--dim", "geometry.dim", "spatial dimension {1,2}");
    override_flag(app, c, "--dx", "geometry.dx", "grid width");
    override_flag(app, c, "--full-scale", "geometry.full_scale", "2D grid width 1/100 (true|false)");
    override_flag(app, c, "--materials", "materials.pair", "material pair, e.g. air-steel");
    override_flag(app, c, "--tf", "time.tf", "final time");
    override_flag(app, c, "--scheme", "time.scheme", "time integrator {ie,sdirk2}");
    override_flag(app, c, "--algo", "coupling.algo", "coupling algorithm {dnwr,nnwr}");
    override_flag(app, c, "--c1", "time.c1", "step multiplier on Omega_1");
    override_flag(app, c, "--c2", "time.c2", "step multiplier on Omega_2");
    override_flag(app, c, "--n", "time.n", "base number of timesteps");
    override_flag(app, c, "--tol", "coupling.tol", "WR termination tolerance");
    override_flag(app, c, "--adaptive-tol", "time.adaptive_tol", "run time-adaptive DNWR with this TOL");
    override_flag(app, c, "--kmax", "coupling.kmax", "maximum WR iterations");
    override_flag(app, c, "--theta", "coupling.theta", "relaxation parameter <value|opt|adaptive>");
    override_flag(app, c, "--rule", "coupling.rule", "multirate theta rule {max,min,avg,mix}");
    override_flag(app, c, "--initial", "initial.condition", "initial condition {sine,bump}");
}

wr::ExperimentConfig resolve(const Common& c) {
    wr::ExperimentConfig cfg = c.config_path.empty() ? wr::ExperimentConfig{} : wr::load_config(c.config_path);
    if (c.overrides.count("materials.pair")) cfg.set("materials.pair", c.overrides.at("materials.pair"));
    for (const auto& [k, v] : c.overrides) {
        if (k != "materials.pair") cfg.set(k, v);
    }
    cfg.validate();
    return cfg;
}

void save(const Common& c, const wr::Table& t, const std::string& stem, wr::PlotKind kind) {
    std::filesystem::create_directories(c.out_dir);
    const auto csv = (std::filesystem::path(c.out_dir) / (stem + ".csv")).string();
    t.save(csv);
    std::cout << "wrote " << csv << '\n';
    if (c.svg) {
        const auto svg = (std::filesystem::path(c.out_dir) / (stem + ".svg")).string();
        wr::emit_plot(csv, kind, svg);
        std::cout << "wrote " << svg << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Waveform relaxation experiments for coupled heat equations"};
    app.require_subcommand(1);

    Common common;
    int theta_points = 20;
    int c_lo = -8, c_hi = 8, per_decade = 1;
    int n0 = 20, halvings = 4, refinement = 8;
    std::vector<int> base_steps{1, 2, 4, 8, 16};
    std::vector<double> tols{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    double ref_tol = 0.0;
    std::string csv_in, svg_out, kind = "loglog";

    auto* run = app.add_subcommand("run", "single coupled run with an iteration log");
    add_common(*run, common);

    auto* rate = app.add_subcommand("rate-vs-theta", "observed and theoretical rates over theta");
    add_common(*rate, common);
    rate->add_option("--points", theta_points, "number of theta grid points in (0,1]")->capture_default_str();

    auto* rules = app.add_subcommand("theta-rules", "observed rates of the multirate theta rules over c");
    add_common(*rules, common);
    rules->add_option("--c-lo", c_lo, "lowest decade of c = dt/dx^2")->capture_default_str();
    rules->add_option("--c-hi", c_hi, "highest decade of c")->capture_default_str();
    rules->add_option("--per-decade", per_decade, "points per decade")->capture_default_str();

    auto* order = app.add_subcommand("order", "error over dt against a monolithic reference");
    add_common(*order, common);
    order->add_option("--n0", n0, "coarsest number of base steps")->capture_default_str();
    order->add_option("--halvings", halvings, "number of step halvings")->capture_default_str();
    order->add_option("--refinement", refinement, "reference refinement relative to the finest dt")
        ->capture_default_str();

    auto* work = app.add_subcommand("work", "error over work, multirate against adaptive");
    add_common(*work, common);
    work->add_option("--base-steps", base_steps, "multirate base step counts N");
    work->add_option("--tols", tols, "adaptive tolerances");
    work->add_option("--ref-tol", ref_tol, "reference tolerance (default 1e-6)");

    auto* map = app.add_subcommand("theta-map", "optimal theta over c = dt/dx^2");
    add_common(*map, common);
    map->add_option("--c-lo", c_lo, "lowest decade of c")->capture_default_str();
    map->add_option("--c-hi", c_hi, "highest decade of c")->capture_default_str();
    map->add_option("--per-decade", per_decade, "points per decade")->capture_default_str();

    auto* sweep = app.add_subcommand("adaptive-sweep", "time-adaptive DNWR error over TOL");
    add_common(*sweep, common);
    sweep->add_option("--tols", tols, "tolerances");
    sweep->add_option("--ref-tol", ref_tol, "reference tolerance (default 1e-8 in 1D, 1e-7 in 2D)");

    auto* plot = app.add_subcommand("plot", "render a CSV produced by another subcommand as SVG");
    plot->add_option("--csv", csv_in, "input CSV")->required();
    plot->add_option("--svg", svg_out, "output SVG")->required();
    plot->add_option("--kind", kind, "linear|semilogx|semilogy|loglog")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (plot->parsed()) {
            wr::emit_plot(csv_in, wr::parse_plot_kind(kind), svg_out);
            std::cout << "wrote " << svg_out << '\n';
            return exit_ok;
        }
        // the order study sets n itself, so validate against its coarsest run
        if (order->parsed()) common.overrides["time.n"] = std::to_string(n0);
        const wr::ExperimentConfig cfg = resolve(common);
        if (run->parsed()) {
            const wr::WRProblem problem = wr::build_problem(cfg);
            if (cfg.algo == wr::AlgorithmChoice::monolithic) {
                const auto traj = wr::monolithic_run(problem, cfg.n1());
                std::cout << "monolithic: " << traj.grid.size() - 1 << " steps, |u(T_f)|_I = "
                          << wr::inner_norm(traj.final_state, problem.monolithic().l2_mass, problem.monolithic().measure)
                          << '\n';
                return exit_ok;
            }
            const wr::WRResult r = wr::run_wr(cfg, problem);
            wr::Table log({"k", "update_norm", "theta", "steps_1", "steps_2"});
            for (const auto& rec : r.records) {
                log.add_row({static_cast<long long>(rec.k), rec.update_norm, rec.theta,
                             static_cast<long long>(rec.steps_1), static_cast<long long>(rec.steps_2)});
            }
            log.set_meta("converged", r.converged ? "true" : "false");
            log.set_meta("diverged", r.diverged ? "true" : "false");
            log.set_meta("work", std::to_string(r.work));
            save(common, log, "run_log", wr::PlotKind::semilogy);
            std::cout << (r.converged ? "converged" : r.diverged ? "diverged" : "not converged") << " after "
                      << r.iterations << " iterations, work " << r.work << '\n';
            return r.diverged ? exit_solver : exit_ok;
        }
        if (rate->parsed()) {
            save(common, wr::run_rate_vs_theta(cfg, wr::theta_grid(theta_points)), "rate_vs_theta",
                 wr::PlotKind::semilogy);
        } else if (rules->parsed()) {
            save(common, wr::run_theta_rule_comparison(cfg, wr::log_sweep(c_lo, c_hi, per_decade)), "theta_rules",
                 wr::PlotKind::loglog);
        } else if (order->parsed()) {
            save(common, wr::run_order_study(cfg, n0, halvings, refinement), "order", wr::PlotKind::loglog);
        } else if (work->parsed()) {
            save(common, wr::run_error_over_work(cfg, base_steps, tols, ref_tol > 0.0 ? ref_tol : 1e-6), "work",
                 wr::PlotKind::loglog);
        } else if (map->parsed()) {
            save(common, wr::run_theta_map(cfg.mat_1(), cfg.mat_2(), cfg.dx(), wr::log_sweep(c_lo, c_hi, per_decade)),
                 "theta_map", wr::PlotKind::semilogx);
        } else if (sweep->parsed()) {
            const double ref = ref_tol > 0.0 ? ref_tol : (cfg.dim == 1 ? 1e-8 : 1e-7);
            save(common, wr::run_adaptive_sweep(cfg, tols, ref), "adaptive_sweep", wr::PlotKind::loglog);
        }
        return exit_ok;
    } catch (const wr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const wr::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    } catch (const wr::DomainError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }
}
