#ifndef FRHEAT_SPECFUN_HPP
#define FRHEAT_SPECFUN_HPP

#include "frheat/errors.hpp"

namespace frheat {

/// Caputo order, 0 < beta < 1.
struct FracOrder {
  double beta;
  explicit FracOrder(double b);
};

/// Evaluation policy for the two-parameter Mittag-Leffler function on z <= 0.
struct MLEvalConfig {
  int series_cutoff_terms = 200;
  double regime_threshold = 10.0;  // |z| above this goes straight to the asymptotic series
  int asymptotic_terms = 12;
  double target_rel_err = 1e-10;
  void validate() const;
};

/// Gamma function on the positive half line.
double gamma_fn(double x);

/// Complementary error function.
double erfc_fn(double x);

/// E_{a,b}(z) = sum_k z^k / Gamma(a k + b) for a in (0,1], b > 0, z <= 0.
///
/// Taylor regime runs in quad precision to absorb the alternating-series
/// cancellation; beyond the threshold (or when the Taylor bound misses the
/// target) the algebraic asymptotic expansion in 1/x takes over.  The
/// mid-range window where both certified bounds miss falls back to the real
/// spectral-integral representation (a < 1 only).  Throws AccuracyError when
/// no route reaches cfg.target_rel_err.
double ml(double a, double b, double z, const MLEvalConfig& cfg = MLEvalConfig{});

/// One-parameter shorthand E_a(z) = E_{a,1}(z).
inline double ml1(double a, double z, const MLEvalConfig& cfg = MLEvalConfig{}) {
  return ml(a, 1.0, z, cfg);
}

/// Probability density k_beta(tau) = (1/(pi beta)) sum (-tau)^{n-1} Gamma(n beta + 1)/n! sin(n pi beta).
///
/// Sums the series in quad precision and certifies the result against the
/// accumulated cancellation; throws RangeError once tau leaves the range where
/// the partial sum can still be trusted to 1e-12 relative.
double density_k(FracOrder beta, double tau, int terms = 800);

/// Largest tau for which density_k is certified at the given order.
double density_tau_max(FracOrder beta, int terms = 800);

struct DensityMoments {
  double m0;  // integral of k_beta, should be 1
  double m1;  // integral of tau k_beta, should be 1/Gamma(1+beta)
  double tail_bound;
};

/// Zeroth and first moments of k_beta by composite quadrature on the certified
/// range plus a numeric tail bound (decay rate estimated from the last samples).
DensityMoments density_moments(FracOrder beta, int quadrature_nodes = 2000);

namespace detail {
// Exposed for regime cross-checks in the tests.
double ml_taylor(double a, double b, double z, int cutoff, double& achieved_rel);
double ml_asymptotic(double a, double b, double x, int max_terms, double& achieved_rel);
// Spectral-integral route for E_{a,b}(-x), valid for a < 1, b < 1 + a, x > 0.
double ml_integral(double a, double b, double x, double& achieved_rel);
// 1/Gamma(y) on the whole real line, zero at the poles.
double recip_gamma(double y);
// sin(pi y) with exact argument reduction.
double sinpi(double y);
}  // namespace detail

}  // namespace frheat

#endif
