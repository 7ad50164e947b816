#pragma once

#include <stdexcept>
#include <string>

namespace vatsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A rate outside its admissible domain (e.g. an inside rate >= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent policy configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Household microdata that fails ingestion or validation.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: unreachable target or non-convergence.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace vatsim
