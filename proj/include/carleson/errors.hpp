#pragma once

#include <stdexcept>
#include <string>

namespace carleson {

/// Input lies outside the region where a formula is defined (e.g. a point on
/// or beyond the unit sphere).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A parameter is out of range or malformed.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input data failed validation (negative atom weights, bad schema, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical analysis step could not produce a trustworthy number.
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace carleson
