#include "wr/relaxation.hpp"

#include "wr/errors.hpp"
#include "wr/linear_solver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace wr {

double SchurOperator::scalar() const {
    if (value.rows() != 1 || value.cols() != 1) throw ConfigError("Schur operator is not scalar");
    return value(0, 0);
}

SchurOperator schur_direct(const BlockSystem& sys, double dt, int subdomain) {
    if (!(dt > 0.0)) throw ConfigError("timestep must be positive");
    const double inv = 1.0 / dt;
    const SparseMatrix k_ii = inv * sys.m_ii + sys.a_ii;
    const SparseMatrix k_ig = inv * sys.m_ig + sys.a_ig;
    const SparseMatrix k_gi = inv * sys.m_gi + sys.a_gi;
    const SparseMatrix k_gg = inv * sys.m_gg + sys.a_gg;
    DenseMatrix value = DenseMatrix(k_gg);
    if (sys.n_interior() > 0) {
        const DenseMatrix x = LinearSolver(k_ii).solve(DenseMatrix(k_ig));
        value -= k_gi * x;
    }
    return SchurOperator{std::move(value), dt, subdomain};
}

Index unit_interior_count(double dx) {
    if (!(dx > 0.0 && dx < 1.0)) throw ConfigError("grid width must lie in (0, 1)");
    const double cells = 1.0 / dx;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * cells) throw ConfigError("1/dx must be an integer");
    return static_cast<Index>(rounded) - 1;
}

double schur_closed_form_1d(const Material& material, double dx, double dt, Index n_interior) {
    material.validate();
    if (!(dx > 0.0) || !(dt > 0.0)) throw ConfigError("grid width and timestep must be positive");
    const double al = material.alpha;
    const double lam = material.lambda;
    const double dx2 = dx * dx;
    const double f = al * dx2 - 6.0 * lam * dt;
    double s = 0.0;
    for (Index i = 1; i <= n_interior; ++i) {
        const double arg = static_cast<double>(i) * std::numbers::pi * dx;
        const double sn = std::sin(arg);
        s += 3.0 * dt * dx2 * sn * sn / (2.0 * al * dx2 + 6.0 * lam * dt + f * std::cos(arg));
    }
    return (6.0 * dt * dx * (al * dx2 + 3.0 * lam * dt) - f * f * s) / (18.0 * dt * dt * dx2);
}

double theta_opt_dnwr(double s1, double s2) { return 1.0 / std::abs(1.0 + s1 / s2); }

double theta_opt_nnwr(double s1, double s2) { return 1.0 / std::abs(2.0 + s1 / s2 + s2 / s1); }

double theta_opt_dnwr(const SchurOperator& s1, const SchurOperator& s2) {
    return theta_opt_dnwr(s1.scalar(), s2.scalar());
}

double theta_opt_nnwr(const SchurOperator& s1, const SchurOperator& s2) {
    return theta_opt_nnwr(s1.scalar(), s2.scalar());
}

ThetaLimits dnwr_limits(const Material& m1, const Material& m2) {
    return {m2.alpha / (m1.alpha + m2.alpha), m2.lambda / (m1.lambda + m2.lambda)};
}

ThetaLimits nnwr_limits(const Material& m1, const Material& m2) {
    const double sa = m1.alpha + m2.alpha;
    const double sl = m1.lambda + m2.lambda;
    return {m1.alpha * m2.alpha / (sa * sa), m1.lambda * m2.lambda / (sl * sl)};
}

double dnwr_iteration_factor(double s1, double s2, double theta) {
    return theta * (-s1 / s2) + 1.0 - theta;
}

double nnwr_iteration_factor(double s1, double s2, double theta) {
    return 1.0 - theta * (2.0 + s1 / s2 + s2 / s1);
}

double iteration_factor(Algorithm algo, double s1, double s2, double theta) {
    return algo == Algorithm::dnwr ? dnwr_iteration_factor(s1, s2, theta) : nnwr_iteration_factor(s1, s2, theta);
}

double iteration_spectral_radius(Algorithm algo, const SchurOperator& s1, const SchurOperator& s2, double theta) {
    const DenseMatrix& a = s1.value;
    const DenseMatrix& b = s2.value;
    if (a.rows() != b.rows()) throw ConfigError("Schur operators differ in size");
    const Index n = a.rows();
    const DenseMatrix id = DenseMatrix::Identity(n, n);
    DenseMatrix t;
    if (algo == Algorithm::dnwr) {
        t = -theta * b.partialPivLu().solve(a) + (1.0 - theta) * id;
    } else {
        t = id - theta * (a.partialPivLu().solve(id) + b.partialPivLu().solve(id)) * (a + b);
    }
    if (n == 1) return std::abs(t(0, 0));
    return Eigen::EigenSolver<DenseMatrix>(t, false).eigenvalues().cwiseAbs().maxCoeff();
}

ThetaPolicy ThetaPolicy::fixed(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("relaxation parameter must lie in (0, 1]");
    return {Kind::fixed, theta, DtRule::max};
}

ThetaPolicy ThetaPolicy::opt(DtRule rule) { return {Kind::opt, 1.0, rule}; }

ThetaPolicy ThetaPolicy::adaptive_avg() { return {Kind::adaptive_avg, 1.0, DtRule::max}; }

double theta_opt_1d(Algorithm algo, const Material& m1, const Material& m2, double dx, double dt1, double dt2) {
    const Index n = unit_interior_count(dx);
    const double s1 = schur_closed_form_1d(m1, dx, dt1, n);
    const double s2 = schur_closed_form_1d(m2, dx, dt2, n);
    return algo == Algorithm::dnwr ? theta_opt_dnwr(s1, s2) : theta_opt_nnwr(s1, s2);
}

double select_theta(const ThetaPolicy& policy, double dt1, double dt2, double dx, const Material& m1,
                    const Material& m2, Algorithm algo) {
    if (policy.kind == ThetaPolicy::Kind::fixed) return policy.theta;
    if (!(dt1 > 0.0 && dt2 > 0.0)) throw ConfigError("stepsizes must be positive");
    const DtRule rule = policy.kind == ThetaPolicy::Kind::adaptive_avg ? DtRule::max : policy.rule;
    switch (rule) {
        case DtRule::max: {
            const double dt = std::max(dt1, dt2);
            return theta_opt_1d(algo, m1, m2, dx, dt, dt);
        }
        case DtRule::min: {
            const double dt = std::min(dt1, dt2);
            return theta_opt_1d(algo, m1, m2, dx, dt, dt);
        }
        case DtRule::avg: {
            const double dt = 0.5 * (dt1 + dt2);
            return theta_opt_1d(algo, m1, m2, dx, dt, dt);
        }
        case DtRule::mix:
            return theta_opt_1d(algo, m1, m2, dx, dt1, dt2);
    }
    throw ConfigError("unknown stepsize rule");
}

const char* to_string(DtRule rule) {
    switch (rule) {
        case DtRule::max: return "max";
        case DtRule::min: return "min";
        case DtRule::avg: return "avg";
        case DtRule::mix: return "mix";
    }
    return "?";
}

const char* to_string(Algorithm algo) { return algo == Algorithm::dnwr ? "dnwr" : "nnwr"; }

}  // namespace wr
