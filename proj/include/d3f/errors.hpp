#pragma once

#include <stdexcept>
#include <string>

namespace d3f {

// Base class for everything thrown by this library, so callers can catch
// library failures separately from std:: errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Byte-level container problems: wrong magic, bad tag, malformed persisted file.
struct FormatError : Error {
    using Error::Error;
};

// Stream shorter or longer than its header promises.
struct LengthError : Error {
    using Error::Error;
};

// A value outside its documented range (e.g. a label byte above 9).
struct RangeError : Error {
    using Error::Error;
};

// Two inputs that must agree in shape or count do not.
struct ConsistencyError : Error {
    using Error::Error;
};

// An argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

// A score pool with zero spread; downstream tilting would be meaningless.
struct DegeneracyError : Error {
    using Error::Error;
};

// Requested rate lies at or beyond the support boundary of the model.
struct UnattainableRateError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

// Training preconditions violated (e.g. only one class present).
struct TrainingSetupError : Error {
    using Error::Error;
};

// A simulation plan that cannot be executed as stated.
struct PlanError : Error {
    using Error::Error;
};

// Filesystem-level failure, message names the offending path.
struct IoError : Error {
    using Error::Error;
};

// Bad run configuration (CLI or config file).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace d3f
