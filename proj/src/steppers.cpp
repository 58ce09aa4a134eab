#include "wr/steppers.hpp"

#include "wr/adaptivity.hpp"
#include "wr/errors.hpp"
#include "wr/linear_solver.hpp"

#include <cmath>
#include <string>

namespace wr {

const SdirkTableau& sdirk2_tableau() {
    static const SdirkTableau tableau = [] {
        const double a = 1.0 - std::sqrt(2.0) / 2.0;
        const double a_hat = 2.0 - 1.25 * std::sqrt(2.0);
        return SdirkTableau{a, a_hat, {{{a, 0.0}, {1.0 - a, a}}}, {1.0 - a, a}, {1.0 - a_hat, a_hat}, {a, 1.0}};
    }();
    return tableau;
}

Vector three_point_initial_derivative(const Vector& u0, const Vector& u1, const Vector& u2, double dt) {
    if (!(dt > 0.0)) throw ConfigError("stepsize must be positive");
    return (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * dt);
}

namespace {

constexpr long max_adaptive_steps = 5'000'000;

// Factorization of M + gamma A, refreshed only when gamma changes.
class ShiftedSolver {
public:
    ShiftedSolver(const SparseMatrix& mass, const SparseMatrix& stiffness) : mass_(mass), stiffness_(stiffness) {}

    const LinearSolver& at(double gamma) {
        if (gamma != gamma_) {
            solver_.refactor(SparseMatrix(mass_ + gamma * stiffness_));
            gamma_ = gamma;
        }
        return solver_;
    }

private:
    const SparseMatrix& mass_;
    const SparseMatrix& stiffness_;
    LinearSolver solver_;
    double gamma_ = -1.0;
};

// Equidistant grids are stepped with dt = T_f / N so every step shares one
// factorization.
double uniform_step(std::span<const double> grid) {
    if (grid.size() < 2) throw ConfigError("a time grid needs at least one step");
    if (grid.front() != 0.0) throw ConfigError("time grid must start at t = 0");
    const double n = static_cast<double>(grid.size() - 1);
    const double dt = grid.back() / n;
    if (!(dt > 0.0)) throw ConfigError("final time must be positive");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs((grid[i] - grid[i - 1]) - dt) > 1e-9 * dt) {
            throw ConfigError("fixed-step sweeps need an equidistant time grid");
        }
    }
    return dt;
}

void check_dirichlet_inputs(const BlockSystem& sys, const Vector& u0, const Waveform& g) {
    if (u0.size() != sys.n_interior()) throw ConfigError("Dirichlet initial state has the wrong size");
    if (g.width() != sys.n_interface()) throw ConfigError("interface waveform has the wrong width");
}

void check_neumann_inputs(const BlockSystem& sys, const Vector& u0, const Waveform& q) {
    if (u0.size() != sys.n_interior() + sys.n_interface()) {
        throw ConfigError("Neumann initial state has the wrong size");
    }
    if (q.width() != sys.n_interface()) throw ConfigError("flux waveform has the wrong width");
}

Vector flux(const BlockSystem& sys, const Vector& gdot, const Vector& udot, const Vector& g, const Vector& u) {
    return sys.m_gg * gdot + sys.m_gi * udot + sys.a_gg * g + sys.a_gi * u;
}

// -A u - (0, q): right-hand side for the stage slope k in (M + gamma A) k = ...,
// after which the stage value is u + gamma k.
Vector slope_rhs(const SparseMatrix& stiffness, const Vector& u, const Vector& q) {
    Vector rhs = -(stiffness * u);
    if (q.size() > 0) rhs.tail(q.size()) -= q;
    return rhs;
}

// Time-stepping state advanced with Kahan-compensated increments, so the
// rounding of a large state by many small steps does not accumulate.
class State {
public:
    explicit State(const Vector& initial) : value_(initial), carry_(Vector::Zero(initial.size())) {}

    const Vector& value() const { return value_; }
    void advance(const Vector& delta) {
        const Vector y = delta - carry_;
        Vector t = value_ + y;
        carry_ = (t - value_) - y;
        value_ = std::move(t);
    }

private:
    Vector value_;
    Vector carry_;
};

struct SdirkStep {
    Vector delta;  // u_{n+1} - u_n
    Vector u;      // Dirichlet: u_{n+1} as used in the stage-2 flux
    Vector stage1;  // Dirichlet: first-stage flux
    Vector stage2;  // Dirichlet: second-stage flux
    Vector error;
};

// One SDIRK2 step of the Dirichlet problem with interface data g.
SdirkStep dirichlet_sdirk_step(const BlockSystem& sys, const LinearSolver& solver, const Waveform& g,
                               const Vector& u, double t, double t_next, double dt, bool estimate) {
    const auto& tab = sdirk2_tableau();
    const double a = tab.a;
    const double adt = a * dt;
    const Vector g_n = g.evaluate(t);
    const Vector g_a = g.evaluate(t + adt);
    const Vector g_1 = g.evaluate(t_next);

    const Vector gdot1 = (g_a - g_n) / adt;
    const Vector& s1 = u;
    const Vector k1 = solver.solve(Vector(-(sys.a_ii * s1 + sys.m_ig * gdot1 + sys.a_ig * g_a)));
    const Vector U1 = s1 + adt * k1;

    const Vector gdot2 = (g_1 - (g_n + (1.0 - a) * dt * gdot1)) / adt;
    const Vector s2 = s1 + (1.0 - a) * dt * k1;
    const Vector k2 = solver.solve(Vector(-(sys.a_ii * s2 + sys.m_ig * gdot2 + sys.a_ig * g_1)));
    Vector U2 = s2 + adt * k2;

    SdirkStep step;
    step.stage1 = flux(sys, gdot1, k1, g_a, U1);
    step.stage2 = flux(sys, gdot2, k2, g_1, U2);
    if (estimate) step.error = dt * (a - tab.a_hat) * (k2 - k1);
    step.delta = (1.0 - a) * dt * k1 + adt * k2;
    step.u = std::move(U2);
    return step;
}

// One SDIRK2 step of M u' + A u = -(0, q) with stage forcings q1, q2 (empty
// vectors for an unforced system).
SdirkStep full_sdirk_step(const SparseMatrix& stiffness, const LinearSolver& solver, const Vector& u, double dt,
                          const Vector& q1, const Vector& q2, bool estimate) {
    const auto& tab = sdirk2_tableau();
    const double a = tab.a;
    const double adt = a * dt;
    const Vector& s1 = u;
    const Vector k1 = solver.solve(slope_rhs(stiffness, s1, q1));
    const Vector s2 = s1 + (1.0 - a) * dt * k1;
    const Vector k2 = solver.solve(slope_rhs(stiffness, s2, q2));

    SdirkStep step;
    if (estimate) step.error = dt * (a - tab.a_hat) * (k2 - k1);
    step.delta = (1.0 - a) * dt * k1 + adt * k2;
    return step;
}

NeumannOutput make_neumann_output(std::vector<double> grid, std::vector<Vector> traces, Vector final_state,
                                  std::vector<double> errors) {
    Waveform interface(grid, std::move(traces));
    return NeumannOutput{std::move(grid), std::move(interface), std::move(final_state), std::move(errors)};
}

// Stepsize sequence of an adaptive sweep: truncation at T_f, a minimum of two
// steps, and the PI update for every untruncated step.
class AdaptiveClock {
public:
    AdaptiveClock(double tf, double tol, double dt0) : tf_(tf), state_{tol, dt0, 0.0} {
        if (!(tf > 0.0)) throw ConfigError("final time must be positive");
        if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw SolverError("initial stepsize is not positive");
    }

    bool done() const { return t_ >= tf_; }
    double time() const { return t_; }

    // Stepsize for the next step and its end point.
    double propose() {
        double dt = state_.dt;
        if (steps_ == 0) dt = std::min(dt, tf_ / 2.0);
        truncated_ = t_ + dt >= tf_ * (1.0 - 1e-10);
        if (truncated_) dt = tf_ - t_;
        next_ = truncated_ ? tf_ : t_ + dt;
        state_.dt = dt;
        return dt;
    }
    double next_time() const { return next_; }

    void accept(double err) {
        if (!truncated_) pi_step(state_, err);
        t_ = next_;
        if (++steps_ > max_adaptive_steps) {
            throw SolverError("adaptive sweep exceeded " + std::to_string(max_adaptive_steps) + " steps");
        }
        if (!(state_.dt > 0.0) || !std::isfinite(state_.dt)) throw SolverError("stepsize controller broke down");
    }

private:
    double tf_;
    ControllerState state_;
    double t_ = 0.0;
    double next_ = 0.0;
    bool truncated_ = false;
    long steps_ = 0;
};

}  // namespace

DirichletOutput ie_dirichlet(const BlockSystem& sys, const Vector& u0_interior, const Waveform& g,
                             std::span<const double> grid, bool keep_states) {
    check_dirichlet_inputs(sys, u0_interior, g);
    const double dt = uniform_step(grid);
    ShiftedSolver shifted(sys.m_ii, sys.a_ii);
    const LinearSolver& solver = shifted.at(dt);

    std::vector<Vector> fluxes(grid.size());
    std::vector<Vector> states;
    if (keep_states) states.push_back(u0_interior);
    State u(u0_interior);
    Vector g_prev = g.evaluate(grid[0]);
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        const Vector g_next = g.evaluate(grid[n + 1]);
        const Vector gdot = (g_next - g_prev) / dt;
        const Vector udot = solver.solve(Vector(-(sys.a_ii * u.value() + sys.m_ig * gdot + sys.a_ig * g_next)));
        if (n == 0) fluxes[0] = flux(sys, gdot, udot, g_prev, u.value());
        u.advance(dt * udot);
        fluxes[n + 1] = flux(sys, gdot, udot, g_next, u.value());
        g_prev = g_next;
        if (keep_states) states.push_back(u.value());
    }
    std::vector<double> times(grid.begin(), grid.end());
    Waveform wave(times, std::move(fluxes));
    return DirichletOutput{std::move(times), std::move(wave), std::nullopt, std::move(states), u.value(), {}};
}

NeumannOutput ie_neumann(const BlockSystem& sys, const Vector& u0_full, const Waveform& q,
                         std::span<const double> grid) {
    check_neumann_inputs(sys, u0_full, q);
    const double dt = uniform_step(grid);
    ShiftedSolver shifted(sys.mass, sys.stiffness);
    const LinearSolver& solver = shifted.at(dt);
    const Index ng = sys.n_interface();

    std::vector<Vector> traces;
    traces.reserve(grid.size());
    State u(u0_full);
    traces.push_back(u0_full.tail(ng));
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        u.advance(dt * solver.solve(slope_rhs(sys.stiffness, u.value(), q.evaluate(grid[n + 1]))));
        traces.push_back(u.value().tail(ng));
    }
    return make_neumann_output({grid.begin(), grid.end()}, std::move(traces), u.value(), {});
}

DirichletOutput sdirk2_dirichlet(const BlockSystem& sys, const Vector& u0_interior, const Waveform& g,
                                 std::span<const double> grid, bool estimate_errors, bool keep_states) {
    check_dirichlet_inputs(sys, u0_interior, g);
    if (grid.size() < 3) throw ConfigError("SDIRK2 sweeps need at least two timesteps");
    const double dt = uniform_step(grid);
    const auto& tab = sdirk2_tableau();
    ShiftedSolver shifted(sys.m_ii, sys.a_ii);
    const LinearSolver& solver = shifted.at(tab.a * dt);

    const std::size_t n_steps = grid.size() - 1;
    std::vector<Vector> stage1, stage2(grid.size()), states;
    stage1.reserve(n_steps);
    std::vector<double> errors;
    states.push_back(u0_interior);
    State u(u0_interior);
    for (std::size_t n = 0; n < n_steps; ++n) {
        SdirkStep step = dirichlet_sdirk_step(sys, solver, g, u.value(), grid[n], grid[n + 1], dt, estimate_errors);
        stage1.push_back(std::move(step.stage1));
        stage2[n + 1] = std::move(step.stage2);
        if (estimate_errors) errors.push_back(inner_norm(step.error, sys.l2_ii, sys.mesh.measure()));
        u.advance(step.delta);
        if (keep_states || n < 2) states.push_back(u.value());
    }

    const Vector g0 = g.evaluate(grid[0]);
    const Vector gdot0 = three_point_initial_derivative(g0, g.evaluate(grid[1]), g.evaluate(grid[2]), dt);
    const Vector udot0 = three_point_initial_derivative(states[0], states[1], states[2], dt);
    stage2[0] = flux(sys, gdot0, udot0, g0, u0_interior);
    if (!keep_states) states.clear();

    std::vector<double> times(grid.begin(), grid.end());
    StageWaveform first(times, tab.a, stage2[0], std::move(stage1), stage2.back());
    Waveform second(times, std::move(stage2));
    return DirichletOutput{std::move(times), std::move(second), std::move(first), std::move(states),
                           u.value(), std::move(errors)};
}

NeumannOutput sdirk2_neumann(const BlockSystem& sys, const Vector& u0_full, const StageWaveform& q1,
                             const Waveform& q2, std::span<const double> grid, bool estimate_errors) {
    check_neumann_inputs(sys, u0_full, q2);
    if (q1.wave().width() != q2.width()) throw ConfigError("stage flux waveforms must share one width");
    if (grid.size() < 3) throw ConfigError("SDIRK2 sweeps need at least two timesteps");
    const double dt = uniform_step(grid);
    const auto& tab = sdirk2_tableau();
    ShiftedSolver shifted(sys.mass, sys.stiffness);
    const LinearSolver& solver = shifted.at(tab.a * dt);
    const Index ng = sys.n_interface();

    std::vector<Vector> traces;
    traces.reserve(grid.size());
    std::vector<double> errors;
    State u(u0_full);
    traces.push_back(u0_full.tail(ng));
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        SdirkStep step = full_sdirk_step(sys.stiffness, solver, u.value(), dt, q1.evaluate(grid[n] + tab.a * dt),
                                         q2.evaluate(grid[n + 1]), estimate_errors);
        if (estimate_errors) errors.push_back(inner_norm(step.error, sys.l2_mass, sys.mesh.measure()));
        u.advance(step.delta);
        traces.push_back(u.value().tail(ng));
    }
    return make_neumann_output({grid.begin(), grid.end()}, std::move(traces), u.value(), std::move(errors));
}

std::vector<Vector> sdirk2_neumann_error_vectors(const BlockSystem& sys, const Vector& u0_full,
                                                 const StageWaveform& q1, const Waveform& q2,
                                                 std::span<const double> grid) {
    check_neumann_inputs(sys, u0_full, q2);
    const double dt = uniform_step(grid);
    const auto& tab = sdirk2_tableau();
    ShiftedSolver shifted(sys.mass, sys.stiffness);
    const LinearSolver& solver = shifted.at(tab.a * dt);
    std::vector<Vector> out;
    State u(u0_full);
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        SdirkStep step = full_sdirk_step(sys.stiffness, solver, u.value(), dt, q1.evaluate(grid[n] + tab.a * dt),
                                         q2.evaluate(grid[n + 1]), true);
        out.push_back(std::move(step.error));
        u.advance(step.delta);
    }
    return out;
}

DirichletOutput adaptive_sdirk2_dirichlet(const BlockSystem& sys, const Vector& u0_interior,
                                          const Waveform& g, double tf, double tol) {
    check_dirichlet_inputs(sys, u0_interior, g);
    if (std::abs(g.final_time() - tf) > 1e-12 * tf) throw ConfigError("interface waveform must end at T_f");
    const auto& tab = sdirk2_tableau();
    AdaptiveClock clock(tf, tol, initial_step(tf, tol, sys, u0_interior));
    ShiftedSolver shifted(sys.m_ii, sys.a_ii);

    std::vector<double> grid{0.0};
    std::vector<Vector> stage1, stage2{Vector()}, first_states{u0_interior};
    std::vector<double> errors;
    State u(u0_interior);
    while (!clock.done()) {
        const double t = clock.time();
        const double dt = clock.propose();
        const double t_next = clock.next_time();
        SdirkStep step = dirichlet_sdirk_step(sys, shifted.at(tab.a * dt), g, u.value(), t, t_next, dt, true);
        const double err = inner_norm(step.error, sys.l2_ii, sys.mesh.measure());
        errors.push_back(err);
        stage1.push_back(std::move(step.stage1));
        stage2.push_back(std::move(step.stage2));
        u.advance(step.delta);
        if (first_states.size() < 3) first_states.push_back(u.value());
        grid.push_back(t_next);
        clock.accept(err);
    }

    const double dt0 = grid[1] - grid[0];
    const double dt1 = grid[2] - grid[1];
    const Vector g0 = g.evaluate(0.0);
    const Vector gdot0 = nonuniform_initial_derivative(g0, g.evaluate(grid[1]), g.evaluate(grid[2]), dt0, dt1);
    const Vector udot0 = nonuniform_initial_derivative(first_states[0], first_states[1], first_states[2], dt0, dt1);
    stage2[0] = flux(sys, gdot0, udot0, g0, u0_interior);

    StageWaveform first(grid, tab.a, stage2[0], std::move(stage1), stage2.back());
    Waveform second(grid, std::move(stage2));
    return DirichletOutput{std::move(grid), std::move(second), std::move(first), {}, u.value(),
                           std::move(errors)};
}

NeumannOutput adaptive_sdirk2_neumann(const BlockSystem& sys, const Vector& u0_full,
                                      const StageWaveform& q1, const Waveform& q2, double tf, double tol) {
    check_neumann_inputs(sys, u0_full, q2);
    const auto& tab = sdirk2_tableau();
    const Index ng = sys.n_interface();
    AdaptiveClock clock(tf, tol, initial_step(tf, tol, sys, u0_full.head(sys.n_interior())));
    ShiftedSolver shifted(sys.mass, sys.stiffness);

    std::vector<double> grid{0.0};
    std::vector<Vector> traces{u0_full.tail(ng)};
    std::vector<double> errors;
    State u(u0_full);
    while (!clock.done()) {
        const double t = clock.time();
        const double dt = clock.propose();
        const double t_next = clock.next_time();
        SdirkStep step = full_sdirk_step(sys.stiffness, shifted.at(tab.a * dt), u.value(), dt,
                                         q1.evaluate(t + tab.a * dt), q2.evaluate(t_next), true);
        const double err = inner_norm(step.error, sys.l2_mass, sys.mesh.measure());
        errors.push_back(err);
        u.advance(step.delta);
        traces.push_back(u.value().tail(ng));
        grid.push_back(t_next);
        clock.accept(err);
    }
    return make_neumann_output(std::move(grid), std::move(traces), u.value(), std::move(errors));
}

Trajectory integrate_full_system(const SparseMatrix& mass, const SparseMatrix& stiffness, const Vector& u0,
                                 std::span<const double> grid, Scheme scheme, bool keep_states) {
    if (u0.size() != mass.rows()) throw ConfigError("initial state has the wrong size");
    if (scheme == Scheme::sdirk2 && grid.size() < 3) throw ConfigError("SDIRK2 runs need at least two timesteps");
    const double dt = uniform_step(grid);
    const double gamma = scheme == Scheme::sdirk2 ? sdirk2_tableau().a * dt : dt;
    ShiftedSolver shifted(mass, stiffness);
    const LinearSolver& solver = shifted.at(gamma);

    Trajectory out;
    out.grid.assign(grid.begin(), grid.end());
    if (keep_states) out.states.push_back(u0);
    State u(u0);
    const Vector none;
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        if (scheme == Scheme::implicit_euler) {
            u.advance(dt * solver.solve(Vector(-(stiffness * u.value()))));
        } else {
            u.advance(full_sdirk_step(stiffness, solver, u.value(), dt, none, none, false).delta);
        }
        if (keep_states) out.states.push_back(u.value());
    }
    out.final_state = u.value();
    return out;
}

}  // namespace wr
