#pragma once

#include <stdexcept>
#include <string>

namespace tamelab {

/// Base class for every error raised by the library. The CLI maps each
/// subclass onto its own exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in tori / lattices of different dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A window, pattern space or search table would exceed a fixed size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A coordinate, shift or parameter falls outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed or contradictory arguments.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Unparseable configuration or unknown source kind.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A certificate or witness failed re-verification.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tamelab
