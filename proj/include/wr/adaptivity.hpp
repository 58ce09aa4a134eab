#pragma once

#include "wr/fem_core.hpp"

namespace wr {

/// Step-size controller state of one subdomain sweep.
struct ControllerState {
    double tol = 1e-3;       ///< subdomain tolerance tau
    double dt = 0.0;         ///< current stepsize
    double prev_err = 0.0;   ///< ||l_{n-1}||_I, 0 until the first update

    bool has_history() const { return prev_err > 0.0; }
};

/// Error estimates below tol * 1e-8 are clamped to this floor.
inline double error_floor(double tol) { return tol * 1e-8; }

/// PI3333 controller: dt_{n+1} = dt_n (tol/err_n)^(1/3) (tol/err_{n-1})^(-1/6).
///
/// Without history the proportional part alone is used. Updates `state`
/// (dt and prev_err) and returns the new stepsize.
double pi_step(ControllerState& state, double err);

/// dt_0 = T_f sqrt(tol) / (100 (1 + ||M_II^-1 A_II u_I(0)||_I)).
double initial_step(double tf, double tol, const BlockSystem& sys, const Vector& u0_interior);

struct ToleranceSplit {
    double dirichlet;
    double neumann;
};

/// Each subdomain solver gets TOL / 5.
ToleranceSplit tolerance_split(double tol_outer);

/// Second-order one-sided derivative at t = 0 from samples at 0, dt0 and
/// dt0 + dt1.
Vector nonuniform_initial_derivative(const Vector& u0, const Vector& u1, const Vector& u2, double dt0,
                                     double dt1);

}  // namespace wr
