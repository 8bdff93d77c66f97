#pragma once

#include <stdexcept>
#include <string>

namespace lk {

// Base for everything thrown by the kit. Callers that only care about
// "did the numerics fail" can catch this.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    double best_residual;
    NoConvergence(const std::string& msg, double residual)
        : Error(msg), best_residual(residual) {}
};

struct InvariantViolation : Error {
    using Error::Error;
};

// Raised by the closed-form geometry factors when a denominator is within
// the guard band of zero. The message names the offending factor.
struct SingularGeometry : Error {
    using Error::Error;
};

struct BelowThreshold : Error {
    using Error::Error;
};

struct UnsupportedScheme : Error {
    using Error::Error;
};

struct ConfigError : Error {
    std::string field_path;
    ConfigError(const std::string& path, const std::string& msg)
        : Error(path + ": " + msg), field_path(path) {}
};

}  // namespace lk
