#ifndef FRHEAT_SOLUTION_HPP
#define FRHEAT_SOLUTION_HPP

#include "frheat/problem.hpp"

namespace frheat {

/// Full mild-solution operator on the grid:
///   (T u)(t_n) = S_beta(t_n) H[u] + int_0^{t_n} (t_n-r)^{beta-1} T_beta(t_n-r) F(r,u(r)) dr.
/// At t = 0 this equals H[u] exactly.
Trajectory solution_operator(const ProblemSpec& problem, const Trajectory& u,
                             const VolterraWeights& W);

/// Convenience overload building the weights on the fly.
Trajectory solution_operator(const ProblemSpec& problem, const Trajectory& u);

/// L1-scheme Caputo residual of a trajectory against the strong equation
///   (L1 D^beta u)_n + mu_m u_n - lambda F_n(u);  uniform grids only.
struct CaputoResidual {
  std::vector<double> node_l2;  // l2 over modes, nodes 1..N
  double max_node;              // max of node_l2
  double time_l2;               // sqrt(h * sum node_l2^2), the certificate scalar
};

CaputoResidual caputo_l1_residual(const ProblemSpec& problem, const Trajectory& u,
                                  double lambda);

}  // namespace frheat

#endif
