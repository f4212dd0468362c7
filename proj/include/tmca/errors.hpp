#pragma once

#include <stdexcept>
#include <string>

namespace tmca {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible shapes or slot counts between operands.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid values in an input (NaN logits, non-binary code entries, ...).
struct InvalidInputError : Error {
  using Error::Error;
};

/// Requested instance exceeds a configured size cap.
struct CapacityError : Error {
  using Error::Error;
};

/// Numerical failure inside an iterative or direct solver.
struct SolverError : Error {
  using Error::Error;
};

/// Malformed file contents; message carries the byte offset.
struct ParseError : Error {
  using Error::Error;
};

/// Filesystem failure while writing output.
struct IoError : Error {
  using Error::Error;
};

}  // namespace tmca
