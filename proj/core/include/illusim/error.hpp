#pragma once

#include <stdexcept>
#include <string>

namespace illusim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or invariant was broken by the caller (or by a bug).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Input exceeds a hard size limit (exact oracles, chip capacity).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; message carries file name and line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Missing file or failed filesystem operation.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace illusim
