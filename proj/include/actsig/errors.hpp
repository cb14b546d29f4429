#pragma once

#include <stdexcept>
#include <string>

namespace actsig {

/// Caller supplied a value outside an operation's precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unknown activation identifier.
class RegistryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity is undefined for this activation (e.g. C(phi) with infinite slopes).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Activation lacks metadata that an operation depends on.
class MetadataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neither an analytic value nor the evaluator needed to compute it is available.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integrand or activation returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double at)
      : std::runtime_error(what), location_(at) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// Iterative or adaptive procedure hit its cap without meeting tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_magnitude)
      : std::runtime_error(what), last_magnitude_(last_magnitude) {}
  double last_magnitude() const noexcept { return last_magnitude_; }

 private:
  double last_magnitude_;
};

/// A computed result failed one of its type invariants.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace actsig
