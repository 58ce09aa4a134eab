#include "wr/harness/experiments.hpp"

#include "wr/errors.hpp"
#include "wr/harness/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wr {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double rate_or_nan(const WRResult& r) {
    if (r.update_norms.size() < 2) return nan;
    try {
        return observed_rate(r);
    } catch (const ConfigError&) {
        return nan;
    }
}

long long steps_of(const std::vector<double>& grid) { return static_cast<long long>(grid.size()) - 1; }

void describe(Table& t, const ExperimentConfig& c) {
    t.set_meta("dim", std::to_string(c.dim));
    t.set_meta("dx", c.dx());
    t.set_meta("materials", c.custom_1 || c.custom_2 ? std::string("custom") : c.material_1 + "-" + c.material_2);
    t.set_meta("tf", c.tf);
    t.set_meta("scheme", c.scheme == Scheme::sdirk2 ? "sdirk2" : "ie");
    t.set_meta("algo", c.algo == AlgorithmChoice::nnwr ? "nnwr" : "dnwr");
    t.set_meta("c1:c2", std::to_string(c.c1) + ":" + std::to_string(c.c2));
    t.set_meta("tol", c.tol);
    t.set_meta("kmax", std::to_string(c.k_max));
}

}  // namespace

WRResult run_wr(const ExperimentConfig& config, const WRProblem& problem) {
    WROptions options = config.options();
    if (config.adaptive_tol) {
        if (config.algo != AlgorithmChoice::dnwr) throw ConfigError("time-adaptive runs use DNWR");
        WRProblem p = problem;
        p.scheme = Scheme::sdirk2;
        if (options.policy.kind == ThetaPolicy::Kind::opt) options.policy = ThetaPolicy::adaptive_avg();
        options.tol = *config.adaptive_tol;
        return dnwr_adaptive_run(p, options);
    }
    switch (config.algo) {
        case AlgorithmChoice::dnwr: return dnwr_run(problem, config.n1(), config.n2(), options);
        case AlgorithmChoice::nnwr: return nnwr_run(problem, config.n1(), config.n2(), options);
        case AlgorithmChoice::monolithic: break;
    }
    throw ConfigError("the monolithic solver is not a WR run");
}

std::vector<double> log_sweep(int lo, int hi, int per_decade) {
    if (hi < lo || per_decade < 1) throw ConfigError("bad sweep range");
    std::vector<double> out;
    for (int i = lo * per_decade; i <= hi * per_decade; ++i) {
        out.push_back(std::pow(10.0, static_cast<double>(i) / per_decade));
    }
    return out;
}

std::vector<double> theta_grid(int n) {
    if (n < 1) throw ConfigError("theta grid needs at least one point");
    std::vector<double> out;
    for (int i = 1; i <= n; ++i) out.push_back(static_cast<double>(i) / n);
    return out;
}

Table run_rate_vs_theta(const ExperimentConfig& config, const std::vector<double>& thetas) {
    const WRProblem problem = build_problem(config);
    const Algorithm algo = config.relaxation_algorithm();
    const double dt1 = config.tf / config.n1();
    const double dt2 = config.tf / config.n2();
    const SchurOperator s1 = schur_direct(problem.sys1, dt1, 1);
    const SchurOperator s2 = schur_direct(problem.sys2, dt2, 2);

    Table t({"theta", "observed_rate", "theoretical_rate", "iterations"});
    describe(t, config);
    t.set_meta("theta_opt", select_theta(ThetaPolicy::opt(), dt1, dt2, config.dx(), config.mat_1(),
                                         config.mat_2(), algo));
    for (double theta : thetas) {
        ExperimentConfig c = config;
        c.theta = ThetaPolicy::fixed(theta);
        const WRResult r = run_wr(c, problem);
        t.add_row({theta, rate_or_nan(r), iteration_spectral_radius(algo, s1, s2, theta),
                   static_cast<long long>(r.iterations)});
    }
    return t;
}

Table run_theta_rule_comparison(const ExperimentConfig& config, const std::vector<double>& cs,
                                const std::vector<DtRule>& rules) {
    Table t({"rule", "c", "rate", "theta", "iterations"});
    describe(t, config);
    t.set_meta("tf", "n*c*dx^2");
    const double dx = config.dx();
    ExperimentConfig base = config;
    base.adaptive_tol.reset();
    base.tf = 1.0;
    WRProblem problem = build_problem(base);
    for (DtRule rule : rules) {
        for (double c : cs) {
            ExperimentConfig cfg = base;
            cfg.tf = config.n * c * dx * dx;
            cfg.theta = ThetaPolicy::opt(rule);
            problem.tf = cfg.tf;
            const WRResult r = run_wr(cfg, problem);
            t.add_row({std::string(to_string(rule)), c, rate_or_nan(r), r.records.front().theta,
                       static_cast<long long>(r.iterations)});
        }
    }
    return t;
}

Table run_order_study(const ExperimentConfig& config, int n0, int halvings, int refinement) {
    if (n0 < 1 || halvings < 1 || refinement < 1) throw ConfigError("bad order-study parameters");
    const WRProblem problem = build_problem(config);
    const MonolithicSystem mono = problem.monolithic();
    const int n_max = n0 << halvings;
    const int ref_steps = refinement * std::max(config.c1, config.c2) * n_max;
    const Vector reference = monolithic_run(problem, ref_steps).final_state;

    Table t({"n", "dt", "error", "iterations"});
    describe(t, config);
    t.set_meta("reference_steps", std::to_string(ref_steps));
    t.set_meta("reference_refinement", std::to_string(refinement));
    std::vector<double> dts, errs;
    for (int i = 0; i <= halvings; ++i) {
        ExperimentConfig c = config;
        c.n = n0 << i;
        const WRResult r = run_wr(c, problem);
        const double err = domain_error(mono, r.final_state(mono), reference);
        const double dt = config.tf / c.n;
        dts.push_back(dt);
        errs.push_back(err);
        t.add_row({static_cast<long long>(c.n), dt, err, static_cast<long long>(r.iterations)});
    }
    t.set_meta("slope", loglog_slope(dts, errs));
    return t;
}

Table run_error_over_work(const ExperimentConfig& config, const std::vector<int>& base_steps,
                          const std::vector<double>& tolerances, double reference_tol) {
    const WRProblem problem = build_problem(config);
    const MonolithicSystem mono = problem.monolithic();
    const auto [c1, c2] = cfl_step_ratio(config.mat_1(), config.mat_2());

    ExperimentConfig ref_cfg = config;
    ref_cfg.adaptive_tol = reference_tol;
    const Vector reference = run_wr(ref_cfg, problem).final_state(mono);

    Table t({"method", "work", "error", "parameter", "iterations", "step_ratio"});
    describe(t, config);
    t.set_meta("multirate_ratio", std::to_string(c1) + ":" + std::to_string(c2));
    t.set_meta("reference_tol", reference_tol);
    for (int n : base_steps) {
        ExperimentConfig c = config;
        c.adaptive_tol.reset();
        c.n = n;
        c.c1 = c1;
        c.c2 = c2;
        // time-integration error of this step pair, then terminate at a fifth of it
        c.tol = 1e-12;
        const int mono_steps = 2 * std::max(c1, c2) * n;
        const Vector fine = monolithic_run(problem, mono_steps).final_state;
        const double e = domain_error(mono, run_wr(c, problem).final_state(mono), fine);
        c.tol = e / 5.0;
        const WRResult r = run_wr(c, problem);
        t.add_row({std::string("multirate"), static_cast<long long>(r.work), domain_error(mono, r.final_state(mono), reference),
                   static_cast<double>(n), static_cast<long long>(r.iterations),
                   static_cast<double>(c1) / c2});
    }
    for (double tol : tolerances) {
        ExperimentConfig c = config;
        c.adaptive_tol = tol;
        const WRResult r = run_wr(c, problem);
        t.add_row({std::string("adaptive"), static_cast<long long>(r.work), domain_error(mono, r.final_state(mono), reference),
                   tol, static_cast<long long>(r.iterations),
                   static_cast<double>(steps_of(r.grid_1)) / static_cast<double>(steps_of(r.grid_2))});
    }
    return t;
}

Table run_theta_map(const Material& m1, const Material& m2, double dx, const std::vector<double>& cs) {
    Table t({"c", "dt", "theta_dnwr", "theta_nnwr"});
    const ThetaLimits d = dnwr_limits(m1, m2);
    const ThetaLimits nn = nnwr_limits(m1, m2);
    t.set_meta("dx", dx);
    t.set_meta("dnwr_temporal_limit", d.temporal);
    t.set_meta("dnwr_spatial_limit", d.spatial);
    t.set_meta("nnwr_temporal_limit", nn.temporal);
    t.set_meta("nnwr_spatial_limit", nn.spatial);
    for (double c : cs) {
        const double dt = c * dx * dx;
        t.add_row({c, dt, theta_opt_1d(Algorithm::dnwr, m1, m2, dx, dt, dt),
                   theta_opt_1d(Algorithm::nnwr, m1, m2, dx, dt, dt)});
    }
    return t;
}

Table run_adaptive_sweep(const ExperimentConfig& config, const std::vector<double>& tolerances,
                         double reference_tol) {
    const WRProblem problem = build_problem(config);
    const MonolithicSystem mono = problem.monolithic();
    ExperimentConfig ref_cfg = config;
    ref_cfg.adaptive_tol = reference_tol;
    const Vector reference = run_wr(ref_cfg, problem).final_state(mono);

    Table t({"tol", "error", "work", "iterations", "steps_1", "steps_2", "step_ratio"});
    describe(t, config);
    t.set_meta("reference_tol", reference_tol);
    std::vector<double> tols, errs;
    for (double tol : tolerances) {
        ExperimentConfig c = config;
        c.adaptive_tol = tol;
        const WRResult r = run_wr(c, problem);
        const double err = domain_error(mono, r.final_state(mono), reference);
        const long long n1 = steps_of(r.grid_1);
        const long long n2 = steps_of(r.grid_2);
        tols.push_back(tol);
        errs.push_back(err);
        t.add_row({tol, err, static_cast<long long>(r.work), static_cast<long long>(r.iterations), n1, n2,
                   static_cast<double>(n1) / static_cast<double>(n2)});
    }
    if (tols.size() >= 2) t.set_meta("slope", loglog_slope(tols, errs));
    return t;
}

}  // namespace wr
