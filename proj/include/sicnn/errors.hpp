#pragma once

#include <stdexcept>
#include <string>

namespace sicnn {

// Error categories map one-to-one onto the C API status codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration (unknown keys, invalid values).
class ConfigError : public Error {
public:
  using Error::Error;
};

// A time or index query fell outside the represented range.
class RangeError : public Error {
public:
  using Error::Error;
};

// The integrator could not produce a solution (Picard divergence, history gap).
class SolverError : public Error {
public:
  using Error::Error;
};

// Hypotheses required by an analysis (the smallness conditions) do not hold.
class CertificationError : public Error {
public:
  using Error::Error;
};

// A precondition on an argument was violated by the caller.
class ArgumentError : public Error {
public:
  using Error::Error;
};

} // namespace sicnn
