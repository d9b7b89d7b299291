#pragma once

#include <stdexcept>
#include <string>

namespace cwgp {

// Error taxonomy shared across the library. Everything derives from
// std::runtime_error so callers can catch cwgp failures uniformly while
// the CLI maps concrete types onto exit codes.

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FactorizationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoClosedFormInverse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteObjective : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimizerFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AllStartsFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingColumn : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedVariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cwgp
