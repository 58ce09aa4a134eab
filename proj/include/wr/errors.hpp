#pragma once

#include <stdexcept>
#include <string>

namespace wr {

/// Invalid mesh, material, grid or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Factorization or solve failure (singular or badly conditioned systems).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the time interval a waveform is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace wr
