#ifndef PSSA_ERRORS_HPP
#define PSSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pssa {

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad inputs: wrong dimensions, malformed files, invalid matrices.
/// The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

/// Well-formed inputs on which the requested computation degenerates.
/// The CLI maps these to exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

struct NonUnitData : ValidationError {
  using ValidationError::ValidationError;
};

struct NonOrthonormalFrame : ValidationError {
  using ValidationError::ValidationError;
};

struct NotUnimodular : ValidationError {
  using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};

struct UnknownExample : ValidationError {
  using ValidationError::ValidationError;
};

struct UnknownReportSection : ValidationError {
  using ValidationError::ValidationError;
};

struct RankDeficient : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateMean : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularGram : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateProjection : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateBasis : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace pssa

#endif  // PSSA_ERRORS_HPP
