#pragma once

#include "wr/fem_core.hpp"

namespace wr {

enum class Algorithm { dnwr, nnwr };

/// Interface Schur complement of one subdomain's single-step IE system.
struct SchurOperator {
    DenseMatrix value;
    double dt = 0.0;
    int subdomain = 0;

    /// The 1x1 value of a 1D operator.
    double scalar() const;
};

/// S = (M_GG/dt + A_GG) - (M_GI/dt + A_GI)(M_II/dt + A_II)^-1 (M_IG/dt + A_IG), via column solves.
SchurOperator schur_direct(const BlockSystem& sys, double dt, int subdomain = 0);

/// Closed-form scalar Schur complement of the unit 1D subdomain with
/// `n_interior` interior nodes on an equidistant grid of width dx.
double schur_closed_form_1d(const Material& material, double dx, double dt, Index n_interior);

/// Interior nodes of a unit subdomain: 1/dx - 1.
Index unit_interior_count(double dx);

double theta_opt_dnwr(double s1, double s2);
double theta_opt_nnwr(double s1, double s2);
double theta_opt_dnwr(const SchurOperator& s1, const SchurOperator& s2);
double theta_opt_nnwr(const SchurOperator& s1, const SchurOperator& s2);

struct ThetaLimits {
    double temporal;  ///< dt/dx^2 -> 0
    double spatial;   ///< dt/dx^2 -> infinity
};

ThetaLimits dnwr_limits(const Material& m1, const Material& m2);
ThetaLimits nnwr_limits(const Material& m1, const Material& m2);

/// Scalar IE iteration factors of one WR iteration.
/// DNWR: theta * Sigma + 1 - theta with Sigma = -s1/s2.
/// NNWR: 1 - theta (2 + s1/s2 + s2/s1).
double dnwr_iteration_factor(double s1, double s2, double theta);
double nnwr_iteration_factor(double s1, double s2, double theta);
double iteration_factor(Algorithm algo, double s1, double s2, double theta);

/// Spectral radius of the single-step IE iteration matrix:
/// DNWR theta Sigma + (1 - theta) I with Sigma = -S2^-1 S1,
/// NNWR I - theta (S1^-1 + S2^-1)(S1 + S2).
double iteration_spectral_radius(Algorithm algo, const SchurOperator& s1, const SchurOperator& s2, double theta);

/// How the two subdomain stepsizes enter the Schur complements.
enum class DtRule { max, min, avg, mix };

struct ThetaPolicy {
    enum class Kind { fixed, opt, adaptive_avg };
    Kind kind = Kind::opt;
    double theta = 1.0;
    DtRule rule = DtRule::max;

    static ThetaPolicy fixed(double theta);
    static ThetaPolicy opt(DtRule rule = DtRule::max);
    static ThetaPolicy adaptive_avg();
};

/// Optimal theta from the unit-domain closed form with the given stepsizes.
double theta_opt_1d(Algorithm algo, const Material& m1, const Material& m2, double dx, double dt1, double dt2);

/// Theta for one WR iteration. For adaptive_avg, dt1/dt2 are the average
/// stepsizes of the latest sweeps and the max rule is applied to them.
double select_theta(const ThetaPolicy& policy, double dt1, double dt2, double dx, const Material& m1,
                    const Material& m2, Algorithm algo);

const char* to_string(DtRule rule);
const char* to_string(Algorithm algo);

}  // namespace wr
