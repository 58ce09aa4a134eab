#include "wr/coupling.hpp"

#include "wr/adaptivity.hpp"
#include "wr/errors.hpp"

#include <cmath>
#include <future>

namespace wr {

void WRProblem::validate() const {
    if (!(tf > 0.0)) throw ConfigError("final time must be positive");
    if (sys1.n_interface() != sys2.n_interface()) throw ConfigError("subdomain interfaces do not match");
    if (u0_interface.size() != sys1.n_interface()) throw ConfigError("interface initial value has the wrong size");
    if (u0_interior_1.size() != sys1.n_interior() || u0_interior_2.size() != sys2.n_interior()) {
        throw ConfigError("interior initial value has the wrong size");
    }
}

MonolithicSystem WRProblem::monolithic() const {
    return assemble_monolithic(sys1, sys2, u0_interior_1, u0_interior_2, u0_interface);
}

Vector WRResult::final_state(const MonolithicSystem& mono) const {
    if (!interface) throw ConfigError("result holds no interface waveform");
    return mono.pack(interior_1, interior_2, interface->final_value());
}

namespace {

int check_steps(const WRProblem& problem, int n) {
    const int min_steps = problem.scheme == Scheme::sdirk2 ? 2 : 1;
    if (n < min_steps) {
        throw ConfigError(problem.scheme == Scheme::sdirk2 ? "SDIRK2 needs at least two timesteps per subdomain"
                                                           : "need at least one timestep per subdomain");
    }
    return n;
}

Vector neumann_initial(const WRProblem& problem) {
    Vector u(problem.sys2.n_interior() + problem.sys2.n_interface());
    u << problem.u0_interior_2, problem.u0_interface;
    return u;
}

DirichletOutput dirichlet_sweep(Scheme scheme, const BlockSystem& sys, const Vector& u0, const Waveform& g,
                                const std::vector<double>& grid) {
    return scheme == Scheme::sdirk2 ? sdirk2_dirichlet(sys, u0, g, grid) : ie_dirichlet(sys, u0, g, grid);
}

NeumannOutput neumann_sweep(Scheme scheme, const BlockSystem& sys, const Vector& u0, const Waveform& q,
                            const std::optional<StageWaveform>& q_stage, const std::vector<double>& grid) {
    if (scheme == Scheme::sdirk2) return sdirk2_neumann(sys, u0, *q_stage, q, grid);
    return ie_neumann(sys, u0, q, grid);
}

// Iteration bookkeeping shared by all drivers.
class Monitor {
public:
    Monitor(const WRProblem& problem, const WROptions& options, WRResult& result)
        : options_(options), result_(result) {
        if (!(options.tol > 0.0)) throw ConfigError("WR tolerance must be positive");
        if (options.k_max < 1) throw ConfigError("k_max must be at least 1");
        const double ref = interface_norm(problem.u0_interface, problem.dx(), problem.dim());
        result_.threshold = ref > 0.0 ? options.tol * ref : options.tol;
    }

    // Returns true when the iteration should stop.
    bool record(int k, double norm, double theta, long steps_1, long steps_2) {
        result_.iterations = k + 1;
        result_.update_norms.push_back(norm);
        result_.records.push_back({k, norm, theta, steps_1, steps_2});
        result_.work += steps_1 + steps_2;
        if (norm < result_.threshold) {
            result_.converged = true;
            return true;
        }
        const double first = result_.update_norms.front();
        if (!std::isfinite(norm) || (first > 0.0 && norm > options_.divergence_growth * first)) {
            result_.diverged = true;
            return true;
        }
        return false;
    }

private:
    const WROptions& options_;
    WRResult& result_;
};

Waveform negated_sum(const std::vector<double>& grid, const Waveform& a, const Waveform& b) {
    return Waveform::sample(grid, [&](double t) { return Vector(-(a.evaluate(t) + b.evaluate(t))); });
}

StageWaveform negated_stage_sum(const std::vector<double>& grid, const StageWaveform& a,
                                const StageWaveform& b) {
    const std::vector<double> times = StageWaveform::stage_times(grid, a.abscissa());
    std::vector<Vector> stages;
    stages.reserve(grid.size() - 1);
    for (std::size_t n = 1; n + 1 < times.size(); ++n) stages.push_back(-(a.evaluate(times[n]) + b.evaluate(times[n])));
    const double tf = grid.back();
    return StageWaveform(grid, a.abscissa(), -(a.evaluate(0.0) + b.evaluate(0.0)), std::move(stages),
                         -(a.evaluate(tf) + b.evaluate(tf)));
}

template <class F>
auto maybe_async(bool concurrent, F&& f) {
    return std::async(concurrent ? std::launch::async : std::launch::deferred, std::forward<F>(f));
}

}  // namespace

WRResult dnwr_run(const WRProblem& problem, int n1, int n2, const WROptions& options) {
    problem.validate();
    check_steps(problem, n1);
    check_steps(problem, n2);
    const auto grid_1 = uniform_grid(problem.tf, n1);
    const auto grid_2 = uniform_grid(problem.tf, n2);
    const double theta = select_theta(options.policy, problem.tf / n1, problem.tf / n2, problem.dx(),
                                      problem.sys1.material, problem.sys2.material, Algorithm::dnwr);
    const Vector u0_full_2 = neumann_initial(problem);

    WRResult result;
    Monitor monitor(problem, options, result);
    Waveform g = Waveform::constant(grid_2, problem.u0_interface);
    for (int k = 0; k < options.k_max; ++k) {
        DirichletOutput d = dirichlet_sweep(problem.scheme, problem.sys1, problem.u0_interior_1, g, grid_1);
        NeumannOutput nm = neumann_sweep(problem.scheme, problem.sys2, u0_full_2, d.flux, d.stage_flux, grid_2);
        Waveform next = relax(nm.interface, g, theta);
        const double norm = update_norm_at_final(next, g, problem.dx(), problem.dim());
        g = std::move(next);
        result.interior_1 = std::move(d.final_interior);
        result.interior_2 = nm.final_state.head(problem.sys2.n_interior());
        if (monitor.record(k, norm, theta, n1, n2)) break;
    }
    result.interface = std::move(g);
    result.grid_1 = grid_1;
    result.grid_2 = grid_2;
    return result;
}

WRResult dnwr_adaptive_run(const WRProblem& problem, const WROptions& options) {
    problem.validate();
    if (problem.scheme != Scheme::sdirk2) throw ConfigError("the time-adaptive method uses SDIRK2");
    const ToleranceSplit split = tolerance_split(options.tol);
    const Vector u0_full_2 = neumann_initial(problem);

    WRResult result;
    Monitor monitor(problem, options, result);
    Waveform g = Waveform::constant({0.0, problem.tf}, problem.u0_interface);
    for (int k = 0; k < options.k_max; ++k) {
        DirichletOutput d =
            adaptive_sdirk2_dirichlet(problem.sys1, problem.u0_interior_1, g, problem.tf, split.dirichlet);
        NeumannOutput nm = adaptive_sdirk2_neumann(problem.sys2, u0_full_2, *d.stage_flux, d.flux, problem.tf,
                                                   split.neumann);
        const long steps_1 = static_cast<long>(d.grid.size()) - 1;
        const long steps_2 = static_cast<long>(nm.grid.size()) - 1;
        const double theta = select_theta(options.policy, problem.tf / steps_1, problem.tf / steps_2, problem.dx(),
                                          problem.sys1.material, problem.sys2.material, Algorithm::dnwr);
        Waveform next = relax(nm.interface, g, theta);
        const double norm = update_norm_at_final(next, g, problem.dx(), problem.dim());
        g = std::move(next);
        result.interior_1 = std::move(d.final_interior);
        result.interior_2 = nm.final_state.head(problem.sys2.n_interior());
        result.grid_1 = std::move(d.grid);
        result.grid_2 = std::move(nm.grid);
        if (monitor.record(k, norm, theta, steps_1, steps_2)) break;
    }
    result.interface = std::move(g);
    return result;
}

WRResult nnwr_run(const WRProblem& problem, int n1, int n2, const WROptions& options) {
    problem.validate();
    check_steps(problem, n1);
    check_steps(problem, n2);
    const auto grid_1 = uniform_grid(problem.tf, n1);
    const auto grid_2 = uniform_grid(problem.tf, n2);
    const auto& fine = n1 >= n2 ? grid_1 : grid_2;
    const double theta = select_theta(options.policy, problem.tf / n1, problem.tf / n2, problem.dx(),
                                      problem.sys1.material, problem.sys2.material, Algorithm::nnwr);
    const Scheme scheme = problem.scheme;
    const Vector psi0_1 = Vector::Zero(problem.sys1.n_interior() + problem.sys1.n_interface());
    const Vector psi0_2 = Vector::Zero(problem.sys2.n_interior() + problem.sys2.n_interface());

    WRResult result;
    Monitor monitor(problem, options, result);
    Waveform g = Waveform::constant(fine, problem.u0_interface);
    for (int k = 0; k < options.k_max; ++k) {
        auto task_1 = maybe_async(options.concurrent, [&] {
            return dirichlet_sweep(scheme, problem.sys1, problem.u0_interior_1, g, grid_1);
        });
        DirichletOutput d2 = dirichlet_sweep(scheme, problem.sys2, problem.u0_interior_2, g, grid_2);
        DirichletOutput d1 = task_1.get();

        const Waveform q = negated_sum(fine, d1.flux, d2.flux);
        std::optional<StageWaveform> q_stage;
        if (scheme == Scheme::sdirk2) q_stage = negated_stage_sum(fine, *d1.stage_flux, *d2.stage_flux);

        auto psi_task_1 =
            maybe_async(options.concurrent, [&] { return neumann_sweep(scheme, problem.sys1, psi0_1, q, q_stage, grid_1); });
        NeumannOutput psi_2 = neumann_sweep(scheme, problem.sys2, psi0_2, q, q_stage, grid_2);
        NeumannOutput psi_1 = psi_task_1.get();

        Waveform next = Waveform::sample(fine, [&](double t) {
            return Vector(g.evaluate(t) - theta * (psi_1.interface.evaluate(t) + psi_2.interface.evaluate(t)));
        });
        const double norm = update_norm_at_final(next, g, problem.dx(), problem.dim());
        g = std::move(next);
        result.interior_1 = std::move(d1.final_interior);
        result.interior_2 = std::move(d2.final_interior);
        if (monitor.record(k, norm, theta, 2L * n1, 2L * n2)) break;
    }
    result.interface = std::move(g);
    result.grid_1 = grid_1;
    result.grid_2 = grid_2;
    return result;
}

Trajectory monolithic_run(const WRProblem& problem, int n, bool keep_states) {
    problem.validate();
    check_steps(problem, n);
    const MonolithicSystem mono = problem.monolithic();
    return integrate_full_system(mono.mass, mono.stiffness, mono.initial_state, uniform_grid(problem.tf, n),
                                 problem.scheme, keep_states);
}

double observed_rate(const std::vector<double>& norms) {
    if (norms.size() < 2) throw ConfigError("the observed rate needs at least two iterations");
    // A run that terminates after its second update has no other ratio.
    if (norms.size() == 2) {
        if (!(norms[0] > 0.0)) throw ConfigError("no usable update ratios");
        return norms[1] / norms[0];
    }
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 1; i + 1 < norms.size(); ++i) {
        if (!(norms[i - 1] > 0.0)) break;
        sum += norms[i] / norms[i - 1];
        ++count;
    }
    if (count == 0) throw ConfigError("no usable update ratios");
    return sum / count;
}

double observed_rate(const WRResult& result) { return observed_rate(result.update_norms); }

double domain_error(const MonolithicSystem& mono, const Vector& a, const Vector& b) {
    return inner_norm(a - b, mono.l2_mass, mono.measure);
}

}  // namespace wr
