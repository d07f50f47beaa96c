#ifndef PZETA_ERRORS_HPP
#define PZETA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pzeta {

// Base for all library errors. The CLI maps subclasses onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed matrices, non-prime p, invalid presentation files.
struct InputError : Error {
  using Error::Error;
};

struct InvalidPresentationError : InputError {
  using InputError::InputError;
};

// A pivot or residue decision depends on p-adic digits beyond the stored
// precision.
struct InsufficientPrecisionError : Error {
  using Error::Error;
};

struct SingularInputError : InputError {
  using InputError::InputError;
};

struct NotSublatticeError : InputError {
  using InputError::InputError;
};

struct ContextMismatchError : InputError {
  using InputError::InputError;
};

struct DegreeMismatchError : InputError {
  using InputError::InputError;
};

struct UnsupportedVariantError : InputError {
  using InputError::InputError;
};

// An enumeration would exceed a configured budget.
struct BudgetExceededError : Error {
  using Error::Error;
};

// Counts failed to agree between precision k and k+1 up to the retry cap.
struct NoStabilizationError : Error {
  using Error::Error;
};

// Two routes that must agree disagreed. Always a bug, never user error.
struct InternalInvariantError : Error {
  using Error::Error;
};

}  // namespace pzeta

#endif
