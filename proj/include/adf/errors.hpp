#pragma once

#include <stdexcept>
#include <string>

namespace adf {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid domain object (graph fails its invariants, malformed region, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Bad argument to an operation (out-of-range parameter, mismatched sizes).
struct ArgumentError : Error {
  using Error::Error;
};

// A quadrature measure ended up with no mass.
struct DegenerateMeasureError : Error {
  using Error::Error;
};

// A named construction cannot exist for the given parameters.
struct ConstructionError : Error {
  using Error::Error;
};

// Graph topology does not support the requested operation.
struct TopologyError : Error {
  using Error::Error;
};

// A numerical solver failed to meet its contract.
struct SolverError : Error {
  using Error::Error;
};

// Geometric preconditions of a grid operation are violated.
struct GeometryError : Error {
  using Error::Error;
};

// Scene file could not be parsed or validated.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace adf
