#pragma once

#include "wr/fem_core.hpp"
#include "wr/relaxation.hpp"
#include "wr/steppers.hpp"
#include "wr/waveform.hpp"

#include <optional>
#include <vector>

namespace wr {

/// Two-subdomain transmission problem; Omega_1 takes Dirichlet data in DNWR.
struct WRProblem {
    BlockSystem sys1;
    BlockSystem sys2;
    Vector u0_interior_1;
    Vector u0_interior_2;
    Vector u0_interface;
    double tf = 1.0;
    Scheme scheme = Scheme::implicit_euler;

    /// Throws ConfigError on mismatched widths or a non-positive tf.
    void validate() const;
    MonolithicSystem monolithic() const;
    /// Interface discretization width and dimension for ||.||_Gamma.
    double dx() const { return sys1.mesh.dx; }
    int dim() const { return sys1.mesh.dim; }
};

struct IterationRecord {
    int k = 0;
    double update_norm = 0.0;
    double theta = 1.0;
    long steps_1 = 0;
    long steps_2 = 0;
};

struct WRResult {
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    std::vector<double> update_norms;
    std::vector<IterationRecord> records;
    std::optional<Waveform> interface;
    Vector interior_1;
    Vector interior_2;
    long work = 0;  ///< timesteps over all sweeps of all iterations
    double threshold = 0.0;
    /// Time grids of the last iteration's sweeps.
    std::vector<double> grid_1;
    std::vector<double> grid_2;

    /// (interior_1, interior_2, u_Gamma(T_f)) packed like the monolithic system.
    Vector final_state(const MonolithicSystem& mono) const;
};

struct WROptions {
    double tol = 1e-8;
    int k_max = 50;
    ThetaPolicy policy = ThetaPolicy::opt();
    bool concurrent = false;           ///< NNWR: run the subdomain sweeps in parallel
    double divergence_growth = 1e6;
};

inline constexpr int default_k_max = 50;
inline constexpr int rate_k_max = 6;

/// Fixed multirate DNWR with n1, n2 equidistant steps.
WRResult dnwr_run(const WRProblem& problem, int n1, int n2, const WROptions& options);

/// Time-adaptive SDIRK2 DNWR; each sub-solver runs at options.tol / 5.
WRResult dnwr_adaptive_run(const WRProblem& problem, const WROptions& options);

/// Fixed multirate NNWR. The interface iterate and the flux sum live on the
/// finer of the two grids.
WRResult nnwr_run(const WRProblem& problem, int n1, int n2, const WROptions& options);

/// Monolithic solution with n equidistant steps of the problem's scheme.
Trajectory monolithic_run(const WRProblem& problem, int n, bool keep_states = false);

/// Mean ratio of successive update norms, leaving out the final iteration
/// unless only two norms exist.
double observed_rate(const WRResult& result);
double observed_rate(const std::vector<double>& update_norms);

/// ||a - b||_I over the whole domain.
double domain_error(const MonolithicSystem& mono, const Vector& a, const Vector& b);

}  // namespace wr
