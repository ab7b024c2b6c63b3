#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace claws {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or construction parameters. Maps to CLI exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, std::string key = {})
        : Error(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Anything that goes wrong while a run is being computed. Maps to CLI exit code 3.
class SolverError : public Error {
public:
    using Error::Error;
};

class WaveSpeedError : public SolverError {
public:
    using SolverError::SolverError;
};

class KernelResolutionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnsupportedKernelError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ModeError : public SolverError {
public:
    using SolverError::SolverError;
};

/// A history level was requested that was never recorded.
class SequencingError : public SolverError {
public:
    using SolverError::SolverError;
};

class ModelError : public SolverError {
public:
    using SolverError::SolverError;
};

/// The update left the admissible state box: alpha (and so dt) was underestimated.
class StabilityError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& msg, std::vector<double> residuals)
        : SolverError(msg), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

} // namespace claws
