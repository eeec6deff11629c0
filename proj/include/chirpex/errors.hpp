#pragma once

#include <stdexcept>
#include <string>

namespace chirpex {

// Argument outside the mathematical domain of a formula (arccos, log singularity, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a documented precondition (non-unit axis, empty band, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input lies at a limit where the requested quantity diverges.
class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Sequence or run configuration that cannot be built (bad ranges, adiabaticity).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request would exceed the sample budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Output file could not be created or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chirpex
