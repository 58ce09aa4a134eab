#pragma once

#include "wr/fem_core.hpp"
#include "wr/waveform.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace wr {

/// Two-stage SDIRK2, stiffly accurate, with an embedded first-order solution.
///
///   a | a    0
///   1 | 1-a  a
///   --+----------
///     | 1-a  a
///     | 1-â  â        a = 1 - sqrt(2)/2,  â = 2 - 5 sqrt(2)/4
struct SdirkTableau {
    double a;
    double a_hat;
    std::array<std::array<double, 2>, 2> A;
    std::array<double, 2> b;
    std::array<double, 2> b_hat;
    std::array<double, 2> c;
};

const SdirkTableau& sdirk2_tableau();

enum class Scheme { implicit_euler, sdirk2 };

/// Output of a Dirichlet sweep on Omega_1.
struct DirichletOutput {
    std::vector<double> grid;
    /// IE: q^0..q^N on `grid`. SDIRK2: the second-stage fluxes q_2, which sit
    /// on the step points since c_2 = 1.
    Waveform flux;
    /// SDIRK2 only: first-stage fluxes q_1 at t_n + a dt_n.
    std::optional<StageWaveform> stage_flux;
    std::vector<Vector> interior_states;  ///< only when trajectories are kept
    Vector final_interior;
    std::vector<double> local_errors;     ///< ||l_n||_I per step, adaptive sweeps only
};

/// Output of a Neumann sweep on Omega_2 over the unknowns (u_I, u_Gamma).
struct NeumannOutput {
    std::vector<double> grid;
    Waveform interface;   ///< u_Gamma^0..u_Gamma^N, starting at u_Gamma(0)
    Vector final_state;
    std::vector<double> local_errors;
};

/// Trajectory of a full (monolithic) system.
struct Trajectory {
    std::vector<double> grid;
    std::vector<Vector> states;  ///< empty unless requested
    Vector final_state;
};

/// (-3 u(0) + 4 u(dt) - u(2 dt)) / (2 dt)
Vector three_point_initial_derivative(const Vector& u0, const Vector& u1, const Vector& u2, double dt);

/// Implicit Euler on the Dirichlet problem (M_II + dt A_II) u^{n+1} = ... with
/// interface data g; returns the discrete heat fluxes on `grid`.
DirichletOutput ie_dirichlet(const BlockSystem& sys, const Vector& u0_interior, const Waveform& g,
                             std::span<const double> grid, bool keep_states = false);

/// Implicit Euler on (M + dt A) u^{n+1} = M u^n - dt (0, q(t_{n+1})).
NeumannOutput ie_neumann(const BlockSystem& sys, const Vector& u0_full, const Waveform& q,
                         std::span<const double> grid);

/// SDIRK2 Dirichlet sweep. Needs at least two steps for the 3-point initial
/// flux. With `estimate_errors` the embedded estimate ||l_n||_I is recorded.
DirichletOutput sdirk2_dirichlet(const BlockSystem& sys, const Vector& u0_interior, const Waveform& g,
                                 std::span<const double> grid, bool estimate_errors = false,
                                 bool keep_states = false);

NeumannOutput sdirk2_neumann(const BlockSystem& sys, const Vector& u0_full, const StageWaveform& q1,
                             const Waveform& q2, std::span<const double> grid,
                             bool estimate_errors = false);

/// Raw embedded-estimate vectors of an SDIRK2 Neumann sweep, for tests.
std::vector<Vector> sdirk2_neumann_error_vectors(const BlockSystem& sys, const Vector& u0_full,
                                                 const StageWaveform& q1, const Waveform& q2,
                                                 std::span<const double> grid);

/// Time-adaptive SDIRK2 sweeps with the PI controller and tolerance `tol`.
/// The grid is produced by the controller and ends exactly at tf.
DirichletOutput adaptive_sdirk2_dirichlet(const BlockSystem& sys, const Vector& u0_interior,
                                          const Waveform& g, double tf, double tol);
NeumannOutput adaptive_sdirk2_neumann(const BlockSystem& sys, const Vector& u0_full,
                                      const StageWaveform& q1, const Waveform& q2, double tf,
                                      double tol);

/// M u' + A u = 0 integrated on `grid` with the given scheme.
Trajectory integrate_full_system(const SparseMatrix& mass, const SparseMatrix& stiffness, const Vector& u0,
                                 std::span<const double> grid, Scheme scheme, bool keep_states = false);

}  // namespace wr
