#include "frheat/specfun.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace frheat {

namespace {
constexpr double kQuadEps = 1.93e-34;  // FLT128_EPSILON
}

FracOrder::FracOrder(double b) : beta(b) {
  if (!(b > 0.0) || !(b < 1.0))
    throw std::domain_error("FracOrder: beta must lie in (0,1)");
}

void MLEvalConfig::validate() const {
  if (series_cutoff_terms < 1)
    throw std::domain_error("MLEvalConfig: series_cutoff_terms >= 1 required");
  if (!(regime_threshold > 0.0))
    throw std::domain_error("MLEvalConfig: regime_threshold must be positive");
  if (asymptotic_terms < 1)
    throw std::domain_error("MLEvalConfig: asymptotic_terms >= 1 required");
  if (!(target_rel_err > 0.0) || target_rel_err > 1e-4)
    throw std::domain_error("MLEvalConfig: target_rel_err must lie in (0, 1e-4]");
}

double gamma_fn(double x) {
  if (!(x > 0.0))
    throw std::domain_error("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

double erfc_fn(double x) { return std::erfc(x); }

namespace detail {

double sinpi(double y) {
  double n = std::nearbyint(y);
  double r = y - n;
  double s = std::sin(M_PI * r);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

double recip_gamma(double y) {
  if (y > 0.5) return 1.0 / std::tgamma(y);
  // reflection: 1/Gamma(y) = Gamma(1-y) sin(pi y) / pi; zero at the poles
  double s = sinpi(y);
  if (s == 0.0) return 0.0;
  return std::tgamma(1.0 - y) * s / M_PI;
}

double ml_taylor(double a, double b, double z, int cutoff, double& achieved_rel) {
  if (z == 0.0) {
    achieved_rel = 4.0 * 2.3e-16;
    return recip_gamma(b);
  }
  const __float128 lnx = logq(-(__float128)z);
  __float128 sum = 0.0q, maxterm = 0.0q;
  __float128 last = 0.0q;
  bool converged = false;
  int k = 0;
  for (; k < cutoff; ++k) {
    __float128 lt = (__float128)k * lnx - lgammaq((__float128)a * k + b);
    __float128 t = expq(lt);
    if (k % 2 == 1) t = -t;
    sum += t;
    __float128 at = fabsq(t);
    if (at > maxterm) maxterm = at;
    // terms past the peak decay monotonically; stop once negligible
    if (k > 2 && at < fabsq(last) && at <= 1e-36q * (fabsq(sum) + 1e-300q)) {
      last = t;
      converged = true;
      break;
    }
    last = t;
  }
  double asum = (double)fabsq(sum);
  double trunc = converged ? 0.0 : (double)fabsq(last);
  double denom = std::max(asum, 1e-300);
  achieved_rel = ((double)(maxterm)*kQuadEps + trunc) / denom + 4.0 * 2.3e-16;
  return (double)sum;
}

double ml_asymptotic(double a, double b, double x, int max_terms, double& achieved_rel) {
  // E_{a,b}(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(b - a k), optimal truncation
  double sum = 0.0;
  double lnx = std::log(x);
  double min_mag = std::numeric_limits<double>::infinity();
  double omitted = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_terms; ++k) {
    double y = b - a * k;
    if (1.0 - y > 170.0) break;  // Gamma(1-y) would overflow in the reflection
    double rg = recip_gamma(y);
    double mag = std::exp(-k * lnx) * std::fabs(rg);
    if (rg != 0.0 && mag > min_mag) {
      omitted = mag;  // series has turned; stop at the optimal truncation point
      break;
    }
    if (rg != 0.0) {
      min_mag = mag;
      omitted = mag;
    }
    double term = std::exp(-k * lnx) * rg;
    sum += (k % 2 == 1) ? term : -term;
  }
  double denom = std::max(std::fabs(sum), 1e-300);
  achieved_rel = omitted / denom + 4.0 * 2.3e-16;
  return sum;
}

double ml_integral(double a, double b, double x, double& achieved_rel) {
  // E_{a,b}(-x) = (1/pi) int_0^inf u^{a-b} e^{-u}
  //                 (u^a sin(pi(1-b)) + x sin(pi(1-b+a)))
  //               / (u^{2a} + 2 u^a x cos(pi a) + x^2) du,   0 < a < 1.
  // The denominator stays >= x^2 sin^2(pi a) > 0 on the real axis.  The
  // substitution u = w^m with m chosen from the endpoint exponent removes the
  // integrable singularity at u = 0, after which composite Simpson with step
  // doubling converges to the quadrature tolerance.
  achieved_rel = std::numeric_limits<double>::infinity();
  if (!(a > 0.0) || a >= 1.0 || !(x > 0.0) || !(b < 1.0 + a)) return 0.0;
  const double s1 = sinpi(1.0 - b);
  const double s2 = sinpi(1.0 - b + a);
  const double cpa = std::cos(M_PI * a);
  const double endpoint_exp = (s2 != 0.0) ? (a - b) : (2.0 * a - b);
  int m = (int)std::ceil(3.0 / (1.0 + endpoint_exp));
  if (m < 1) m = 1;
  const double U = 100.0;  // e^{-100} is far below any representable tail
  const double W = std::pow(U, 1.0 / m);
  const auto f = [&](double w) -> double {
    if (w <= 0.0) return 0.0;
    double u = std::pow(w, m);
    double ua = std::pow(u, a);
    double num = std::pow(u, a - b) * std::exp(-u) * (ua * s1 + x * s2);
    double den = ua * ua + 2.0 * ua * x * cpa + x * x;
    return num / den * m * std::pow(w, m - 1);
  };
  double prev = 0.0;
  for (int n = 64; n <= (1 << 20); n *= 2) {
    double h = W / n, acc = f(0.0) + f(W);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    double I = acc * h / 3.0 / M_PI;
    if (n > 64) {
      double diff = std::fabs(I - prev);
      if (diff <= 1e-12 * std::fabs(I)) {
        achieved_rel = diff / std::max(std::fabs(I), 1e-300) + 1e-13;
        return I;
      }
    }
    prev = I;
  }
  achieved_rel = 1.0;
  return prev;
}

}  // namespace detail

namespace {

// Memo for the quad-precision evaluations; the solver re-requests identical
// (a, b, z) multiplier values on every fixed-point iteration.
struct MLKey {
  double a, b, z, target;
  bool operator<(const MLKey& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (z != o.z) return z < o.z;
    return target < o.target;
  }
};

}  // namespace

double ml(double a, double b, double z, const MLEvalConfig& cfg) {
  cfg.validate();
  if (!(a > 0.0) || a > 1.0)
    throw std::domain_error("ml: parameter a must lie in (0,1]");
  if (!(b > 0.0)) throw std::domain_error("ml: parameter b must be positive");
  if (!(z <= 0.0)) throw std::domain_error("ml: argument must be nonpositive");

  static std::map<MLKey, double> memo;
  static std::mutex memo_mtx;
  const MLKey key{a, b, z, cfg.target_rel_err};
  {
    std::lock_guard<std::mutex> lk(memo_mtx);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }

  const double x = -z;
  const auto evaluate = [&]() -> double {
    double val_t = 0.0, err_t = std::numeric_limits<double>::infinity();
    double val_a = 0.0, err_a = std::numeric_limits<double>::infinity();

    if (x <= cfg.regime_threshold) {
      val_t = detail::ml_taylor(a, b, z, cfg.series_cutoff_terms, err_t);
      if (err_t <= cfg.target_rel_err) return val_t;
      val_a = detail::ml_asymptotic(a, b, x, cfg.asymptotic_terms, err_a);
    } else {
      val_a = detail::ml_asymptotic(a, b, x, cfg.asymptotic_terms, err_a);
      if (err_a <= cfg.target_rel_err) return val_a;
      if (x <= std::max(cfg.regime_threshold, 20.0))
        val_t = detail::ml_taylor(a, b, z, cfg.series_cutoff_terms, err_t);
    }
    if (err_a <= cfg.target_rel_err) return val_a;
    if (err_t <= cfg.target_rel_err) return val_t;
    double err_i = std::numeric_limits<double>::infinity();
    if (a <= 0.99 && b < 1.0 + a && x > 0.0) {
      double val_i = detail::ml_integral(a, b, x, err_i);
      if (err_i <= cfg.target_rel_err) return val_i;
    }
    double best = std::min({err_t, err_a, err_i});
    throw AccuracyError("ml: requested tolerance unreachable in configured regime", best);
  };

  double v = evaluate();
  std::lock_guard<std::mutex> lk(memo_mtx);
  memo.emplace(key, v);
  return v;
}

namespace {

// sin(pi y) in quad precision with exact argument reduction.  The density
// coefficients multiply this factor by magnitudes up to ~1e40, so even the
// 1e-16 absolute noise of a double-precision sine would swamp the tiny
// alternating sum; the certification below assumes quad-level coefficients.
__float128 sinpi_q(__float128 y) {
  __float128 n = rintq(y);
  __float128 r = y - n;
  __float128 s = sinq(M_PIq * r);
  return (((long long)n) % 2 == 0) ? s : -s;
}

// Coefficient table for the k_beta series, built once per (beta, terms).
using CoefTable = std::vector<__float128>;

std::shared_ptr<const CoefTable> density_coefs(double beta, int terms) {
  static std::map<std::pair<double, int>, std::shared_ptr<const CoefTable>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lk(mtx);
  auto key = std::make_pair(beta, terms);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto tab = std::make_shared<CoefTable>();
  tab->reserve(terms);
  for (int n = 1; n <= terms; ++n) {
    // Gamma(n beta + 1)/n! * sin(n pi beta) / (pi beta)
    __float128 lmag = lgammaq((__float128)n * beta + 1.0q) - lgammaq((__float128)n + 1.0q);
    __float128 s = sinpi_q((__float128)n * (__float128)beta);
    __float128 c = expq(lmag) * s / (M_PIq * (__float128)beta);
    tab->push_back(c);
  }
  cache.emplace(key, tab);
  return tab;
}

struct DensityEval {
  double value;
  double cancel_bound;  // quad rounding amplified by the largest term
  double trunc_bound;
};

DensityEval density_eval(double beta, double tau, int terms) {
  auto tab = density_coefs(beta, terms);
  const int n = (int)tab->size();
  __float128 sum = 0.0q, maxterm = 0.0q, p = 1.0q;
  // Truncation is bounded by the largest recent term, not the last one alone:
  // the sine factor vanishes on an arithmetic progression of n, so a single
  // final term can be accidentally tiny while the series is still growing.
  __float128 tailmag = 0.0q;
  const int tail_window = std::max(1, n - 20);
  for (int i = 0; i < n; ++i) {
    __float128 t = (*tab)[i] * p;
    sum += t;
    __float128 at = fabsq(t);
    if (at > maxterm) maxterm = at;
    if (i >= tail_window && at > tailmag) tailmag = at;
    p *= -(__float128)tau;
  }
  DensityEval r;
  r.value = (double)sum;
  r.cancel_bound = (double)maxterm * kQuadEps;
  r.trunc_bound = (double)tailmag;
  return r;
}

bool density_certified(const DensityEval& e) {
  double tol = 1e-12 * std::max(std::fabs(e.value), 1e-300);
  return e.cancel_bound <= tol && e.trunc_bound <= tol;
}

}  // namespace

double density_k(FracOrder beta, double tau, int terms) {
  if (!(tau >= 0.0)) throw std::domain_error("density_k: tau must be nonnegative");
  if (terms < 1) throw std::domain_error("density_k: terms must be positive");
  DensityEval e = density_eval(beta.beta, tau, terms);
  if (!density_certified(e))
    throw RangeError("density_k: tau beyond the certified range of the series");
  return e.value;
}

double density_tau_max(FracOrder beta, int terms) {
  double lo = 0.0, hi = 1.0;
  while (density_certified(density_eval(beta.beta, hi, terms)) && hi < 1024.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    if (density_certified(density_eval(beta.beta, mid, terms)))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

DensityMoments density_moments(FracOrder beta, int quadrature_nodes) {
  if (quadrature_nodes < 8)
    throw std::domain_error("density_moments: too few quadrature nodes");
  const int terms = 800;
  double T = 0.999 * density_tau_max(beta, terms);
  int n = quadrature_nodes + (quadrature_nodes % 2);  // Simpson wants an even count
  double h = T / n;
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i <= n; ++i) {
    double tau = i * h;
    double k = density_k(beta, tau, terms);
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    m0 += w * k;
    m1 += w * tau * k;
  }
  m0 *= h / 3.0;
  m1 *= h / 3.0;
  // Tail bound from the local exponential decay rate; the true decay is
  // stretched-exponential with increasing rate, so this over-estimates.
  double kT = density_k(beta, T, terms);
  double kT1 = density_k(beta, T - 0.5, terms);
  double rate = (std::log(kT1) - std::log(kT)) / 0.5;
  if (!(rate > 0.0))
    throw AccuracyError("density_moments: tail decay rate not positive", rate);
  double tail0 = kT / rate;
  double tail1 = (T + 1.0 / rate) * kT / rate;
  double tail = std::max(tail0, tail1);
  if (tail > 1e-8)
    throw AccuracyError("density_moments: tail mass bound exceeds 1e-8", tail);
  return DensityMoments{m0, m1, tail};
}

}  // namespace frheat
