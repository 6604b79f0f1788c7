#pragma once

#include <stdexcept>
#include <string>

namespace seqmeas {

/// Malformed input: wrong shapes, mismatched dimensions, out-of-range
/// arguments. Distinct from a well-formed input that violates a constraint.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input of the right shape that violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value failed its type invariant (density operator, projector family,
/// unitary). Carries the name of the first violated constraint and its
/// residual.
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string constraint, double residual);

  const std::string& constraint() const noexcept { return constraint_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string constraint_;
  double residual_;
};

/// Internal inconsistency that a valid input can never produce.
class InconsistentModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace seqmeas
