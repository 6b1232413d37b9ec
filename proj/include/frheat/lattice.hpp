#ifndef FRHEAT_LATTICE_HPP
#define FRHEAT_LATTICE_HPP

#include <vector>

#include "frheat/specfun.hpp"

namespace frheat {

/// Element of L^2(0,pi) stored as coefficients of the orthonormal Dirichlet
/// sine modes e_n(x) = sqrt(2/pi) sin(n x), n = 1..M.
struct SpectralField {
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(int modes) : coeffs(modes, 0.0) {}

  int modes() const { return (int)coeffs.size(); }
  double l2_norm() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double c);

  /// First eigenfunction (coefficient 1 on mode 1).
  static SpectralField e1(int modes);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double c, SpectralField f);

/// Diagonal realization of -A on the sine basis; built-in spectrum mu_n = n^2.
struct DiagonalGenerator {
  std::vector<double> mu;
  static DiagonalGenerator dirichlet_laplacian(int modes);
  void validate() const;
};

/// Cone parameters for K = { u : u(t,x) >= sigma ||u||_inf e1(x) }.
struct ConeSpec {
  double sigma_cone = 0.1;
  SpectralField e1;
  double pos_tol = 1e-8;
  void validate() const;
};

/// Nodal values f(x_i), x_i = i pi / X, i = 1..X-1 (Dirichlet endpoints dropped).
std::vector<double> to_nodal(const SpectralField& f, int X);

/// Inverse transform; exact on fields band-limited to M < X modes.
SpectralField from_nodal(const std::vector<double>& vals, int modes);

struct FieldNorms {
  double l2;        // Parseval norm of the coefficients
  double lp_nodal;  // trapezoid L^p norm on the nodal grid
  double sup_nodal;
  double min_nodal;
};

FieldNorms norms(const SpectralField& f, double p, int X);

/// Heat semigroup: coefficient-wise e^{-mu_n s}.
SpectralField semigroup_apply(const DiagonalGenerator& g, double s, const SpectralField& f);

/// ML policy used by the operator families: deep series cutoff so the adaptive
/// regime choice always has a usable route on [0, mu_M].
const MLEvalConfig& lattice_ml_config();

/// S_beta(t): coefficient-wise E_beta(-mu_n t^beta).
SpectralField sbeta_apply(const DiagonalGenerator& g, FracOrder beta, double t,
                          const SpectralField& f, const MLEvalConfig& cfg = lattice_ml_config());

/// T_beta(t): coefficient-wise E_{beta,beta}(-mu_n t^beta).
SpectralField tbeta_apply(const DiagonalGenerator& g, FracOrder beta, double t,
                          const SpectralField& f, const MLEvalConfig& cfg = lattice_ml_config());

}  // namespace frheat

#endif
