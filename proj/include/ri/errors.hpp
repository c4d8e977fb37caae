#pragma once

#include <stdexcept>
#include <string>

namespace ri {

/// Malformed graph data: asymmetric or non-positive weights, empty neighbor lists,
/// disconnected windows, windows without escape edges.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside its mathematical domain (negative level, negative potential, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition of an identity does not hold numerically (e.g. a smallness condition).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes to the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A window schedule ran out before the requested tolerance was met.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

/// Invalid user-supplied configuration; `field()` names the offending setting.
class UsageError : public std::invalid_argument {
 public:
  UsageError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ri
