#include "frheat/solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frheat {

Trajectory solution_operator(const ProblemSpec& problem, const Trajectory& u,
                             const VolterraWeights& W) {
  if (u.grid.nodes != problem.grid.nodes)
    throw std::invalid_argument("solution_operator: trajectory not on the problem grid");
  const int N = problem.grid.intervals();
  const int M = problem.modes();
  const int X = problem.eval_grid();

  SpectralField h = eval_H(problem.H, u);

  Trajectory forcing(problem.grid, M);
  for (int n = 0; n <= N; ++n)
    forcing.values[n] = eval_F(problem.F, problem.grid.nodes[n], u.values[n], X);

  Trajectory out = volterra_apply(problem.generator, problem.beta, W, forcing);
  out.values[0] = h;  // S_beta(0) = I, empty integral
  for (int n = 1; n <= N; ++n)
    out.values[n] += sbeta_apply(problem.generator, problem.beta, problem.grid.nodes[n], h);
  return out;
}

Trajectory solution_operator(const ProblemSpec& problem, const Trajectory& u) {
  return solution_operator(problem, u, build_weights(problem.beta, problem.grid));
}

CaputoResidual caputo_l1_residual(const ProblemSpec& problem, const Trajectory& u,
                                  double lambda) {
  if (!u.grid.is_uniform())
    throw std::invalid_argument("caputo_l1_residual: L1 weights assume a uniform grid");
  if (u.grid.nodes != problem.grid.nodes)
    throw std::invalid_argument("caputo_l1_residual: trajectory not on the problem grid");
  const int N = u.grid.intervals();
  const int M = u.modes();
  const int X = problem.eval_grid();
  const double b = problem.beta.beta;
  const double h = u.grid.step();
  const double scale = 1.0 / (gamma_fn(2.0 - b) * std::pow(h, b));

  // a_i = (i+1)^{1-b} - i^{1-b}
  std::vector<double> a(N);
  for (int i = 0; i < N; ++i)
    a[i] = std::pow(i + 1.0, 1.0 - b) - std::pow(double(i), 1.0 - b);

  CaputoResidual r;
  r.node_l2.resize(N);
  double acc_sq = 0.0;
  for (int n = 1; n <= N; ++n) {
    SpectralField Fn = eval_F(problem.F, u.grid.nodes[n], u.values[n], X);
    double sq = 0.0;
    for (int m = 0; m < M; ++m) {
      double d = 0.0;
      for (int j = 1; j <= n; ++j)
        d += a[n - j] * (u.values[j].coeffs[m] - u.values[j - 1].coeffs[m]);
      double res = scale * d + problem.generator.mu[m] * u.values[n].coeffs[m] -
                   lambda * Fn.coeffs[m];
      sq += res * res;
    }
    r.node_l2[n - 1] = std::sqrt(sq);
    acc_sq += sq;
  }
  r.max_node = *std::max_element(r.node_l2.begin(), r.node_l2.end());
  r.time_l2 = std::sqrt(h * acc_sq);
  return r;
}

}  // namespace frheat
