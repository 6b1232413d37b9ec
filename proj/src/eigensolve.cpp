#include "frheat/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frheat {

namespace {

Trajectory normalized_to(Trajectory u, double alpha) {
  double s = u.sup_norm();
  if (!(s > 0.0)) throw DegenerateOperatorError("solve_eigenpair: zero iterate");
  double c = alpha / s;
  for (auto& f : u.values) f *= c;
  return u;
}

}  // namespace

EigenpairResult solve_eigenpair(const ProblemSpec& problem, double alpha,
                                const SolveOptions& opts, const Trajectory* warm_start) {
  if (!(alpha > 0.0)) throw std::domain_error("solve_eigenpair: alpha must be positive");
  ProblemSpec p = problem;
  p.alpha = alpha;
  p.validate();

  const int M = p.modes();
  const VolterraWeights W = build_weights(p.beta, p.grid);

  EigenpairResult res;
  res.alpha = alpha;
  if (warm_start) {
    res.u = normalized_to(*warm_start, alpha);
    res.seed_profile = "warm-start";
  } else {
    res.u = Trajectory::constant(p.grid, alpha * SpectralField::e1(M));
    res.seed_profile = "alpha*e1";
  }

  double d = opts.damping;
  if (!(d > 0.0) || d > 1.0)
    throw std::domain_error("solve_eigenpair: damping must lie in (0,1]");

  double last_step = std::numeric_limits<double>::infinity();
  int nondecreasing = 0;
  for (int k = 0; k < opts.max_iter; ++k) {
    Trajectory v = solution_operator(p, res.u, W);
    double s = v.sup_norm();
    if (s <= opts.audit_floor)
      throw DegenerateOperatorError(
          "solve_eigenpair: sup||T u|| below the audit floor (numerical (h2) failure)");
    double lambda = alpha / s;
    Trajectory lv = v;
    for (auto& f : lv.values) f *= lambda;
    double resid = res.u.sup_dist(lv) / alpha;

    if (k > 0 && last_step <= opts.tol * alpha && resid <= opts.tol) {
      res.lambda = lambda;
      res.fixed_point_residual = resid;
      res.converged = true;
      return res;
    }

    Trajectory unew = res.u;
    for (size_t n = 0; n < unew.values.size(); ++n) {
      unew.values[n] *= (1.0 - d);
      unew.values[n] += d * lv.values[n];
    }
    unew = normalized_to(std::move(unew), alpha);
    double step = res.u.sup_dist(unew);
    res.history.push_back({k, lambda, step, d});
    res.u = std::move(unew);

    if (step >= last_step) {
      if (++nondecreasing >= 5) {
        d = std::max(d * 0.5, 1.0 / 16.0);
        nondecreasing = 0;
      }
    } else {
      nondecreasing = 0;
    }
    last_step = step;
  }

  // report the best iterate with its fresh residual
  Trajectory v = solution_operator(p, res.u, W);
  double s = v.sup_norm();
  res.lambda = s > 0.0 ? alpha / s : 0.0;
  Trajectory lv = v;
  for (auto& f : lv.values) f *= res.lambda;
  res.fixed_point_residual = res.u.sup_dist(lv) / alpha;
  res.converged = false;
  throw NonConvergence("solve_eigenpair: max_iter reached without convergence", res);
}

std::vector<SweepPoint> continuation_in_alpha(const ProblemSpec& problem,
                                              const std::vector<double>& alphas,
                                              const SolveOptions& opts) {
  std::vector<SweepPoint> out;
  const Trajectory* warm = nullptr;
  Trajectory last_u;
  for (double a : alphas) {
    SweepPoint pt;
    pt.alpha = a;
    try {
      pt.result = solve_eigenpair(problem, a, opts, warm);
      pt.ok = true;
      last_u = pt.result.u;
      warm = &last_u;
    } catch (const NonConvergence& e) {
      pt.ok = false;
      pt.error = e.what();
      pt.result = e.best_iterate;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace frheat
