#ifndef FRHEAT_EIGENSOLVE_HPP
#define FRHEAT_EIGENSOLVE_HPP

#include <string>

#include "frheat/solution.hpp"

namespace frheat {

struct IterationRecord {
  int iter;
  double lambda;
  double step_norm;
  double damping;
};

struct EigenpairResult {
  double lambda = 0.0;
  Trajectory u;
  double alpha = 0.0;
  double fixed_point_residual = 0.0;  // ||u - lambda T u||_inf / alpha
  std::vector<IterationRecord> history;
  bool converged = false;
  std::string seed_profile;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double damping = 1.0;
  double audit_floor = 1e-10;
};

/// Thrown when max_iter is exhausted; carries the best iterate found.
class NonConvergence : public NonConvergenceError {
public:
  NonConvergence(const std::string& what, EigenpairResult best)
      : NonConvergenceError(what), best_iterate(std::move(best)) {}
  EigenpairResult best_iterate;
};

/// sup||T u|| collapsed below the audit floor: numerical (h2) failure.
class DegenerateOperatorError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Normalized fixed-point iteration on the cone sphere of radius alpha:
///   v_k = T u_k,  lambda_k = alpha / sup||v_k||,
///   u_{k+1} = normalize((1-d) u_k + d lambda_k v_k).
/// Damping is halved (down to 1/16) when the step norms stop decreasing.
/// The iteration is never retried with different mathematics; failure to
/// converge is reported as NonConvergence with diagnostics.
EigenpairResult solve_eigenpair(const ProblemSpec& problem, double alpha,
                                const SolveOptions& opts = SolveOptions{},
                                const Trajectory* warm_start = nullptr);

struct SweepPoint {
  double alpha;
  bool ok;
  EigenpairResult result;  // best iterate on failure
  std::string error;
};

/// Sequential alpha sweep, warm-starting each solve from the previous
/// eigenfunction rescaled; per-alpha failures are reported, not fatal.
std::vector<SweepPoint> continuation_in_alpha(const ProblemSpec& problem,
                                              const std::vector<double>& alphas,
                                              const SolveOptions& opts = SolveOptions{});

}  // namespace frheat

#endif
