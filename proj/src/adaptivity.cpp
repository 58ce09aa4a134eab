#include "wr/adaptivity.hpp"

#include "wr/errors.hpp"
#include "wr/linear_solver.hpp"

#include <cmath>

namespace wr {

double pi_step(ControllerState& state, double err) {
    if (!(err >= 0.0)) throw ConfigError("error estimate must be non-negative");
    if (!(state.tol > 0.0)) throw ConfigError("controller tolerance must be positive");
    err = std::max(err, error_floor(state.tol));

    double dt = state.dt * std::pow(state.tol / err, 1.0 / 3.0);
    if (state.has_history()) dt *= std::pow(state.tol / state.prev_err, -1.0 / 6.0);
    state.dt = dt;
    state.prev_err = err;
    return dt;
}

double initial_step(double tf, double tol, const BlockSystem& sys, const Vector& u0_interior) {
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    const Vector rate = LinearSolver(sys.m_ii).solve(Vector(sys.a_ii * u0_interior));
    const double norm = inner_norm(rate, sys.l2_ii, sys.mesh.measure());
    return tf * std::sqrt(tol) / (100.0 * (1.0 + norm));
}

ToleranceSplit tolerance_split(double tol_outer) {
    if (!(tol_outer > 0.0)) throw ConfigError("tolerance must be positive");
    return {tol_outer / 5.0, tol_outer / 5.0};
}

Vector nonuniform_initial_derivative(const Vector& u0, const Vector& u1, const Vector& u2, double dt0,
                                     double dt1) {
    if (!(dt0 > 0.0 && dt1 > 0.0)) throw ConfigError("stepsizes must be positive");
    const double c = dt0 / (dt0 + dt1);
    return (-(1.0 - c * c) * u0 + u1 - c * c * u2) / (dt0 * (1.0 - c));
}

}  // namespace wr
