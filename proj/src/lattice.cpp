#include "frheat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace frheat {

namespace {

// sin(k pi / X) for k in [0, 2X); sin(n i pi / X) = table[(n i) mod 2X].
std::shared_ptr<const std::vector<double>> sine_table(int X) {
  static std::map<int, std::shared_ptr<const std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto it = cache.find(X);
  if (it != cache.end()) return it->second;
  auto tab = std::make_shared<std::vector<double>>(2 * X);
  for (int k = 0; k < 2 * X; ++k) (*tab)[k] = std::sin(k * M_PI / X);
  cache.emplace(X, tab);
  return tab;
}

}  // namespace

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.modes() != modes()) throw std::invalid_argument("SpectralField: mode count mismatch");
  for (int i = 0; i < modes(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.modes() != modes()) throw std::invalid_argument("SpectralField: mode count mismatch");
  for (int i = 0; i < modes(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) {
  for (double& v : coeffs) v *= c;
  return *this;
}

SpectralField SpectralField::e1(int modes) {
  SpectralField f(modes);
  f.coeffs[0] = 1.0;
  return f;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double c, SpectralField f) { return f *= c; }

DiagonalGenerator DiagonalGenerator::dirichlet_laplacian(int modes) {
  DiagonalGenerator g;
  g.mu.resize(modes);
  for (int n = 1; n <= modes; ++n) g.mu[n - 1] = double(n) * double(n);
  return g;
}

void DiagonalGenerator::validate() const {
  if (mu.empty() || !(mu[0] > 0.0))
    throw std::domain_error("DiagonalGenerator: mu_1 must be positive");
  for (size_t i = 1; i < mu.size(); ++i)
    if (!(mu[i] > mu[i - 1]))
      throw std::domain_error("DiagonalGenerator: mu must be strictly increasing");
}

void ConeSpec::validate() const {
  if (!(sigma_cone > 0.0) || !(sigma_cone < 1.0))
    throw std::domain_error("ConeSpec: sigma_cone must lie in (0,1)");
  if (!(pos_tol >= 0.0)) throw std::domain_error("ConeSpec: pos_tol must be nonnegative");
}

std::vector<double> to_nodal(const SpectralField& f, int X) {
  const int M = f.modes();
  if (X < M + 1)
    throw std::invalid_argument("to_nodal: grid too coarse for the band limit (aliasing)");
  const double amp = std::sqrt(2.0 / M_PI);
  const auto tab = sine_table(X);
  std::vector<double> out(X - 1, 0.0);
  for (int i = 1; i < X; ++i) {
    double s = 0.0;
    int k = 0;
    for (int n = 1; n <= M; ++n) {
      k += i;
      if (k >= 2 * X) k -= 2 * X;
      s += f.coeffs[n - 1] * (*tab)[k];
    }
    out[i - 1] = amp * s;
  }
  return out;
}

SpectralField from_nodal(const std::vector<double>& vals, int modes) {
  const int X = (int)vals.size() + 1;
  if (X < modes + 1)
    throw std::invalid_argument("from_nodal: grid too coarse for the band limit (aliasing)");
  // discrete sine orthogonality: sum_i sin(n x_i) sin(m x_i) = X/2 delta_nm
  SpectralField f(modes);
  const double amp = std::sqrt(2.0 / M_PI) * M_PI / X;  // (2/X) sqrt(pi/2)
  const auto tab = sine_table(X);
  for (int n = 1; n <= modes; ++n) {
    double s = 0.0;
    int k = 0;
    for (int i = 1; i < X; ++i) {
      k += n;
      while (k >= 2 * X) k -= 2 * X;
      s += vals[i - 1] * (*tab)[k];
    }
    f.coeffs[n - 1] = amp * s;
  }
  return f;
}

FieldNorms norms(const SpectralField& f, double p, int X) {
  if (!(p >= 2.0)) throw std::domain_error("norms: p must lie in [2, infinity)");
  FieldNorms r;
  r.l2 = f.l2_norm();
  auto vals = to_nodal(f, X);
  double h = M_PI / X;
  double acc = 0.0;
  r.sup_nodal = 0.0;
  r.min_nodal = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vals.size(); ++i) {
    double v = vals[i];
    r.sup_nodal = std::max(r.sup_nodal, std::fabs(v));
    r.min_nodal = std::min(r.min_nodal, v);
    acc += std::pow(std::fabs(v), p);  // trapezoid; endpoint values vanish
  }
  r.lp_nodal = std::pow(acc * h, 1.0 / p);
  return r;
}

SpectralField semigroup_apply(const DiagonalGenerator& g, double s, const SpectralField& f) {
  if (!(s >= 0.0)) throw std::domain_error("semigroup_apply: time must be nonnegative");
  SpectralField out = f;
  for (int i = 0; i < f.modes(); ++i) out.coeffs[i] *= std::exp(-g.mu[i] * s);
  return out;
}

const MLEvalConfig& lattice_ml_config() {
  static const MLEvalConfig cfg = [] {
    MLEvalConfig c;
    c.series_cutoff_terms = 4000;
    c.asymptotic_terms = 4000;
    c.target_rel_err = 1e-10;
    return c;
  }();
  return cfg;
}

SpectralField sbeta_apply(const DiagonalGenerator& g, FracOrder beta, double t,
                          const SpectralField& f, const MLEvalConfig& cfg) {
  if (!(t >= 0.0)) throw std::domain_error("sbeta_apply: time must be nonnegative");
  const double tb = std::pow(t, beta.beta);
  SpectralField out = f;
  for (int i = 0; i < f.modes(); ++i)
    out.coeffs[i] *= ml(beta.beta, 1.0, -g.mu[i] * tb, cfg);
  return out;
}

SpectralField tbeta_apply(const DiagonalGenerator& g, FracOrder beta, double t,
                          const SpectralField& f, const MLEvalConfig& cfg) {
  if (!(t >= 0.0)) throw std::domain_error("tbeta_apply: time must be nonnegative");
  const double tb = std::pow(t, beta.beta);
  SpectralField out = f;
  for (int i = 0; i < f.modes(); ++i)
    out.coeffs[i] *= ml(beta.beta, beta.beta, -g.mu[i] * tb, cfg);
  return out;
}

}  // namespace frheat
