#ifndef FRHEAT_PROBLEM_HPP
#define FRHEAT_PROBLEM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frheat/mild.hpp"

namespace frheat {

using TimeFn = std::function<double(double)>;

/// Reaction term F(t,u).  The example1 kind is rho(t) phi0(x) + sigma(t) u/(1+u),
/// evaluated nodally with negative input values clamped at zero.
struct NonlinearitySpec {
  enum class Kind { Zero, Example1, Custom };
  Kind kind = Kind::Zero;

  // example1
  TimeFn rho;
  TimeFn sigma_t;
  SpectralField phi0;
  double rho_min = 0.0;   // essential lower bound of rho (for the audit)
  double sigma_sup = 0.0; // sup of sigma_t (for the audit)

  // custom nodal map (t, nodal values) -> nodal values; no audit bounds derivable
  std::function<std::vector<double>(double, const std::vector<double>&)> custom;

  int eval_grid = 0;  // nodal grid size X; 0 means 2*modes

  static NonlinearitySpec zero();
  static NonlinearitySpec example1(TimeFn rho, TimeFn sigma_t, SpectralField phi0,
                                   double rho_min, double sigma_sup);
  /// The Remark instance: rho = e^{-t}, sigma = cos^2(pi t), phi0 = sin x.
  static NonlinearitySpec remark_instance(int modes);
};

/// Nonlocal initial functional H[u].
struct NonlocalSpec {
  enum class Kind { Integral, Multipoint, Periodic, Fixed };
  Kind kind = Kind::Integral;

  TimeFn omega;                                  // integral kind, omega >= 0
  std::vector<std::pair<double, double>> points; // multipoint (t_i, c_i >= 0)
  SpectralField u0;                              // fixed kind

  static NonlocalSpec integral(TimeFn omega);
  static NonlocalSpec multipoint(std::vector<std::pair<double, double>> pts);
  static NonlocalSpec periodic();
  static NonlocalSpec fixed(SpectralField u0);
};

/// Full instance of the nonlocal Caputo eigenproblem.
struct ProblemSpec {
  FracOrder beta{0.5};
  DiagonalGenerator generator;
  TimeGrid grid;
  NonlinearitySpec F;
  NonlocalSpec H;
  ConeSpec cone;
  double alpha = 1.0;
  std::optional<double> fixed_lambda;  // empty = eigen mode

  int modes() const { return (int)generator.mu.size(); }
  int eval_grid() const { return F.eval_grid > 0 ? F.eval_grid : 2 * modes(); }
  void validate() const;

  /// The Remark instance on a uniform grid (beta = 1/2, omega = 1, alpha = 1).
  static ProblemSpec remark_instance(int modes = 64, int time_nodes = 256,
                                     double alpha = 1.0, double sigma_cone = 0.1);
};

SpectralField eval_F(const NonlinearitySpec& spec, double t, const SpectralField& f,
                     int eval_grid);

SpectralField eval_H(const NonlocalSpec& spec, const Trajectory& u);

/// Quantities certifying hypotheses (f2), (h1), (h2) for the built-in kinds.
struct AuditReport {
  double M_alpha = 0.0;      // analytic bound on ||F(t,v)||, v in the alpha ball
  double N_alpha = 0.0;      // bound on ||H[u]||
  SpectralField Phi_alpha;   // (h1) lower bound
  Trajectory gamma_alpha;    // (f2) lower bound, per grid node
  double b_t0 = 0.0;         // norm of the (h2) expression at t0
  double t0 = 1.0;
  double audit_floor = 1e-10;
  bool passed_f2 = false;
  bool passed_h1 = false;
  bool passed_h2 = false;
  // sampling diagnostics over the heuristic boundary sampler
  double sampled_F_max = 0.0;
  double f2_min_margin = 0.0;  // min over samples/nodes of nodal F - gamma_alpha
  double h1_min_margin = 0.0;  // min over samples of nodal H[u] - Phi_alpha
  std::uint64_t seed = 0;
  bool passed() const { return passed_f2 && passed_h1 && passed_h2; }
};

AuditReport audit(const ProblemSpec& problem, double t0, int samples,
                  std::uint64_t seed = 0);

/// Heuristic sample of the cone sphere: u = sigma alpha e1 + c w with w a
/// nonnegative random nodal profile and c chosen so sup_t ||u(t)|| = alpha.
Trajectory sample_cone_boundary(const ProblemSpec& problem, std::uint64_t& rng_state);

/// xorshift-based uniform in [0,1); deterministic across platforms.
double next_uniform(std::uint64_t& state);

}  // namespace frheat

#endif
