#pragma once

#include "wr/coupling.hpp"
#include "wr/harness/config.hpp"
#include "wr/harness/table.hpp"

#include <vector>

namespace wr {

/// Runs the configured algorithm: adaptive DNWR when an adaptive tolerance is
/// set, otherwise DNWR or NNWR with c1*n and c2*n steps.
WRResult run_wr(const ExperimentConfig& config, const WRProblem& problem);

/// 10^lo ... 10^hi with `per_decade` points per decade.
std::vector<double> log_sweep(int lo_exponent, int hi_exponent, int per_decade = 1);
/// i/n for i = 1..n.
std::vector<double> theta_grid(int n);

/// Columns: theta, observed_rate, theoretical_rate, iterations.
Table run_rate_vs_theta(const ExperimentConfig& config, const std::vector<double>& thetas);

/// Columns: rule, c, rate, theta, iterations. Base stepsize c*dx^2, so
/// T_f = n c dx^2 for every sweep point.
Table run_theta_rule_comparison(const ExperimentConfig& config, const std::vector<double>& cs,
                                const std::vector<DtRule>& rules = {DtRule::max, DtRule::min, DtRule::avg,
                                                                    DtRule::mix});

/// Error of the coupled solution at T_f over n0 * 2^i base steps, i = 0..halvings.
/// The reference is the monolithic solution with refinement * max(c1, c2) * n_max steps.
/// Columns: n, dt, error, iterations; metadata holds the slope.
Table run_order_study(const ExperimentConfig& config, int n0 = 20, int halvings = 4, int refinement = 8);

/// Multirate runs (CFL-matched c1:c2) over `base_steps` and adaptive runs over
/// `tolerances`, measured against an adaptive reference at `reference_tol`.
/// Columns: method, work, error, parameter, iterations, step_ratio.
Table run_error_over_work(const ExperimentConfig& config, const std::vector<int>& base_steps,
                          const std::vector<double>& tolerances, double reference_tol = 1e-6);

/// Columns: c, dt, theta_dnwr, theta_nnwr.
Table run_theta_map(const Material& m1, const Material& m2, double dx, const std::vector<double>& cs);

/// Time-adaptive DNWR over `tolerances` against an adaptive reference run.
/// Columns: tol, error, work, iterations, steps_1, steps_2, step_ratio.
Table run_adaptive_sweep(const ExperimentConfig& config, const std::vector<double>& tolerances,
                         double reference_tol);

}  // namespace wr
