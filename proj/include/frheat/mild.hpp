#ifndef FRHEAT_MILD_HPP
#define FRHEAT_MILD_HPP

#include <vector>

#include "frheat/lattice.hpp"

namespace frheat {

/// Partition of [0,1]; uniform or graded t_j = (j/N)^gamma.
struct TimeGrid {
  enum class Kind { Uniform, Graded };
  Kind kind = Kind::Uniform;
  double gamma = 1.0;
  std::vector<double> nodes;

  static TimeGrid uniform(int N);
  static TimeGrid graded(int N, double gamma);
  int intervals() const { return (int)nodes.size() - 1; }
  bool is_uniform() const { return kind == Kind::Uniform; }
  double step() const;  // uniform grids only
};

/// Element of C([0,1]; V) sampled on a time grid.
struct Trajectory {
  TimeGrid grid;
  std::vector<SpectralField> values;

  Trajectory() = default;
  Trajectory(TimeGrid g, int modes);

  int modes() const { return values.empty() ? 0 : values[0].modes(); }
  /// max_n || values[n] ||_{l2}
  double sup_norm() const;
  /// max_n || values[n] - o.values[n] ||_{l2}
  double sup_dist(const Trajectory& o) const;

  static Trajectory constant(TimeGrid g, const SpectralField& f);
};

/// Product-trapezoidal weights for int_0^{t_n} (t_n - s)^{beta-1} h(s) ds:
/// h is interpolated linearly per cell, the singular factor integrated exactly.
struct VolterraWeights {
  FracOrder beta;
  TimeGrid grid;
  std::vector<std::vector<double>> w;  // w[n][j], 0 <= j <= n
};

VolterraWeights build_weights(FracOrder beta, const TimeGrid& grid);

/// Discrete int_0^{t_n} (t_n-r)^{beta-1} T_beta(t_n-r) forcing(r) dr per node.
/// The operator factor E_{beta,beta}(-mu_m (t_n-t_j)^beta) is sampled at nodes
/// and folded into the smooth part; node 0 is the zero field.
Trajectory volterra_apply(const DiagonalGenerator& g, FracOrder beta,
                          const VolterraWeights& W, const Trajectory& forcing,
                          const MLEvalConfig& cfg = lattice_ml_config());

/// Scalar benchmark: product-integration solve of  ^C D^beta y = -y, y(0)=1
/// (mu = 0 mode, forcing F = -y), whose exact solution is E_beta(-t^beta).
std::vector<double> solve_scalar_relaxation(FracOrder beta, const TimeGrid& grid);

/// Per-node cone membership report for the section-4 cone.
struct ConeReport {
  std::vector<double> margin;   // min over x of u(t_n,x) - sigma ||u||_inf e1(x)
  std::vector<double> min_val;  // min over x of u(t_n,x)
  bool member;                  // all margins >= -pos_tol
  bool nonneg;                  // all nodal values >= -pos_tol
  double worst_margin;
};

ConeReport cone_check(const Trajectory& u, const ConeSpec& cone, int X);

/// Number of worker threads used by mode-parallel loops (1 = serial).
void set_num_threads(int k);
int num_threads();

}  // namespace frheat

#endif
