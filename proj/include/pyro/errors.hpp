#pragma once

#include <stdexcept>
#include <string>

namespace pyro {

/// Error categories used across the pipeline. The CLI maps them to exit codes.
enum class ErrorCode {
    InvalidArgument,
    InvalidState,
    Stability,
    SingularConfig,
    DegenerateFront,
    InvalidDescriptor,
    RankDeficient,
    IllConditioned,
    UndefinedMetric,
    Divergence,
    Config,
    Parse,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Explicit-step stability guard violation; carries the offending ratio.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double ratio)
        : Error(ErrorCode::Stability, what), ratio_(ratio) {}
    double ratio() const { return ratio_; }

private:
    double ratio_;
};

/// Non-finite state detected during time integration; carries the step index.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long step)
        : Error(ErrorCode::Divergence, what), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

/// Pivoted selection ran out of numerically independent columns.
class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(const std::string& what, int achievable)
        : Error(ErrorCode::RankDeficient, what), achievable_(achievable) {}
    int achievable() const { return achievable_; }

private:
    int achievable_;
};

}  // namespace pyro
