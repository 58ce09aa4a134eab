#pragma once

#include "wr/coupling.hpp"
#include "wr/relaxation.hpp"
#include "wr/steppers.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wr {

enum class InitialCondition {
    sine,  ///< 500 sin(pi (x + L1) / (L1 + L2)), times sin(pi y) in 2D
    bump,  ///< 800 sin(2 pi (x + L1) / (L1 + L2))^2 sin(pi y); zero on the interface
};

enum class AlgorithmChoice { dnwr, nnwr, monolithic };

/// One experiment. Every field has a default, a config file or CLI flags
/// override them by key (see docs/config.md).
struct ExperimentConfig {
    int dim = 1;
    double length_1 = 1.0;
    double length_2 = 1.0;
    std::optional<double> dx_override;
    bool full_scale = false;  ///< 2D grid width 1/100 instead of the desk default 1/20

    std::string material_1 = "air";
    std::string material_2 = "steel";
    std::optional<Material> custom_1;
    std::optional<Material> custom_2;

    double tf = 1e4;
    Scheme scheme = Scheme::implicit_euler;
    AlgorithmChoice algo = AlgorithmChoice::dnwr;
    int n = 1;
    int c1 = 1;
    int c2 = 1;
    std::optional<double> adaptive_tol;

    double tol = 1e-8;
    int k_max = default_k_max;
    ThetaPolicy theta = ThetaPolicy::opt();
    InitialCondition initial = InitialCondition::sine;
    bool concurrent = false;

    double dx() const;
    Material mat_1() const;
    Material mat_2() const;
    int n1() const { return c1 * n; }
    int n2() const { return c2 * n; }
    Algorithm relaxation_algorithm() const { return algo == AlgorithmChoice::nnwr ? Algorithm::nnwr : Algorithm::dnwr; }
    WROptions options() const;

    /// Throws ConfigError on inconsistent values.
    void validate() const;

    /// Set one value by its dotted key, e.g. "time.tf" or "coupling.theta".
    void set(const std::string& key, const std::string& value);
    /// key = value pairs of the current state, in file syntax.
    void write(std::ostream& out) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

/// Keys understood by ExperimentConfig::set.
std::vector<std::string> config_keys();

WRProblem build_problem(const ExperimentConfig& config);

Scheme parse_scheme(const std::string& s);
DtRule parse_rule(const std::string& s);

}  // namespace wr
