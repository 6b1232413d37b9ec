#ifndef FRHEAT_ERRORS_HPP
#define FRHEAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace frheat {

/// Requested tolerance could not be met; carries the bound that was achieved.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_bound(achieved) {}
  double achieved_bound;
};

/// Series/quadrature asked for a point outside its certified range.
class RangeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Hypothesis audit cannot be performed for this problem kind.
class AuditUnavailableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration failed; carries diagnostics set by the solver.
class NonConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace frheat

#endif
