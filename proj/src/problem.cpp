#include "frheat/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frheat {

double next_uniform(std::uint64_t& state) {
  // splitmix64
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return double(z >> 11) * 0x1.0p-53;
}

NonlinearitySpec NonlinearitySpec::zero() {
  NonlinearitySpec s;
  s.kind = Kind::Zero;
  return s;
}

NonlinearitySpec NonlinearitySpec::example1(TimeFn rho, TimeFn sigma_t, SpectralField phi0,
                                            double rho_min, double sigma_sup) {
  NonlinearitySpec s;
  s.kind = Kind::Example1;
  s.rho = std::move(rho);
  s.sigma_t = std::move(sigma_t);
  s.phi0 = std::move(phi0);
  s.rho_min = rho_min;
  s.sigma_sup = sigma_sup;
  return s;
}

NonlinearitySpec NonlinearitySpec::remark_instance(int modes) {
  SpectralField phi0(modes);
  phi0.coeffs[0] = std::sqrt(M_PI / 2.0);  // sin x on the orthonormal basis
  return example1([](double t) { return std::exp(-t); },
                  [](double t) { double c = std::cos(M_PI * t); return c * c; },
                  std::move(phi0), std::exp(-1.0), 1.0);
}

NonlocalSpec NonlocalSpec::integral(TimeFn omega) {
  NonlocalSpec s;
  s.kind = Kind::Integral;
  s.omega = std::move(omega);
  return s;
}

NonlocalSpec NonlocalSpec::multipoint(std::vector<std::pair<double, double>> pts) {
  NonlocalSpec s;
  s.kind = Kind::Multipoint;
  s.points = std::move(pts);
  return s;
}

NonlocalSpec NonlocalSpec::periodic() {
  NonlocalSpec s;
  s.kind = Kind::Periodic;
  return s;
}

NonlocalSpec NonlocalSpec::fixed(SpectralField u0) {
  NonlocalSpec s;
  s.kind = Kind::Fixed;
  s.u0 = std::move(u0);
  return s;
}

void ProblemSpec::validate() const {
  if (!(alpha > 0.0)) throw std::domain_error("ProblemSpec: alpha must be positive");
  generator.validate();
  cone.validate();
  if (cone.e1.modes() != modes())
    throw std::domain_error("ProblemSpec: cone e1 mode count mismatch");
  if (fixed_lambda && !(*fixed_lambda > 0.0))
    throw std::domain_error("ProblemSpec: fixed lambda must be positive");
  if (F.kind == NonlinearitySpec::Kind::Example1) {
    if (F.phi0.modes() != modes())
      throw std::domain_error("ProblemSpec: phi0 mode count mismatch");
    for (int i = 0; i <= 100; ++i) {
      double t = i / 100.0;
      if (F.rho(t) < 0.0 || F.sigma_t(t) < 0.0)
        throw std::domain_error("ProblemSpec: example1 requires rho, sigma >= 0 on [0,1]");
    }
  }
  if (H.kind == NonlocalSpec::Kind::Multipoint)
    for (auto& [t, c] : H.points) {
      if (t < 0.0 || t > 1.0)
        throw std::domain_error("ProblemSpec: multipoint node outside [0,1]");
      if (c < 0.0) throw std::domain_error("ProblemSpec: multipoint weight must be >= 0");
    }
}

ProblemSpec ProblemSpec::remark_instance(int modes, int time_nodes, double alpha,
                                         double sigma_cone) {
  ProblemSpec p;
  p.beta = FracOrder(0.5);
  p.generator = DiagonalGenerator::dirichlet_laplacian(modes);
  p.grid = TimeGrid::uniform(time_nodes);
  p.F = NonlinearitySpec::remark_instance(modes);
  p.H = NonlocalSpec::integral([](double) { return 1.0; });
  p.cone = ConeSpec{sigma_cone, SpectralField::e1(modes), 1e-8};
  p.alpha = alpha;
  return p;
}

SpectralField eval_F(const NonlinearitySpec& spec, double t, const SpectralField& f,
                     int eval_grid) {
  const int M = f.modes();
  switch (spec.kind) {
    case NonlinearitySpec::Kind::Zero:
      return SpectralField(M);
    case NonlinearitySpec::Kind::Example1: {
      const int X = eval_grid;
      auto vals = to_nodal(f, X);
      auto phi0_vals = to_nodal(spec.phi0, X);
      const double r = spec.rho(t), s = spec.sigma_t(t);
      for (size_t i = 0; i < vals.size(); ++i) {
        double v = vals[i];
        if (std::isnan(v)) throw std::invalid_argument("eval_F: NaN in input field");
        v = std::max(v, 0.0);
        vals[i] = r * phi0_vals[i] + s * v / (1.0 + v);
      }
      return from_nodal(vals, M);
    }
    case NonlinearitySpec::Kind::Custom: {
      auto vals = spec.custom(t, to_nodal(f, eval_grid));
      return from_nodal(vals, M);
    }
  }
  throw std::logic_error("eval_F: unreachable");
}

SpectralField eval_H(const NonlocalSpec& spec, const Trajectory& u) {
  const int M = u.modes();
  const auto& nodes = u.grid.nodes;
  switch (spec.kind) {
    case NonlocalSpec::Kind::Integral: {
      SpectralField acc(M);
      for (size_t n = 0; n < nodes.size(); ++n) {
        double w = 0.0;  // trapezoid weight
        if (n > 0) w += 0.5 * (nodes[n] - nodes[n - 1]);
        if (n + 1 < nodes.size()) w += 0.5 * (nodes[n + 1] - nodes[n]);
        acc += (w * spec.omega(nodes[n])) * u.values[n];
      }
      return acc;
    }
    case NonlocalSpec::Kind::Multipoint: {
      SpectralField acc(M);
      for (auto& [ti, ci] : spec.points) {
        if (ti < nodes.front() || ti > nodes.back())
          throw std::domain_error("eval_H: multipoint node outside the grid range");
        auto it = std::upper_bound(nodes.begin(), nodes.end(), ti);
        size_t k = std::min<size_t>(nodes.size() - 1, it - nodes.begin());
        if (k == 0) k = 1;
        double t0 = nodes[k - 1], t1 = nodes[k];
        double w1 = (ti - t0) / (t1 - t0);
        acc += (ci * (1.0 - w1)) * u.values[k - 1];
        acc += (ci * w1) * u.values[k];
      }
      return acc;
    }
    case NonlocalSpec::Kind::Periodic:
      return u.values.back();
    case NonlocalSpec::Kind::Fixed:
      return spec.u0;
  }
  throw std::logic_error("eval_H: unreachable");
}

Trajectory sample_cone_boundary(const ProblemSpec& problem, std::uint64_t& rng_state) {
  const int M = problem.modes();
  const int N = problem.grid.intervals();
  const double sig = problem.cone.sigma_cone, alpha = problem.alpha;
  SpectralField floor_field = (sig * alpha) * SpectralField::e1(M);

  // Nonnegative random profiles built from sin(x)(1+cos(jx))/2 >= 0, which is
  // band-limited on the sine basis (modes 1, j-1, j+1); positivity is then
  // exact pointwise, not just at sampling nodes.
  const double amp1 = std::sqrt(M_PI / 2.0);  // sine-mode coefficient of sin(kx)
  std::vector<SpectralField> bumps(N + 1);
  for (int n = 0; n <= N; ++n) {
    SpectralField bump(M);
    bump.coeffs[0] += amp1 * next_uniform(rng_state);  // plain sin x component
    const int L = std::min(M - 2, 8);
    for (int l = 0; l < L; ++l) {
      int j = 2 + int(next_uniform(rng_state) * (M - 2));
      j = std::min(j, M - 1);
      double a = next_uniform(rng_state);
      bump.coeffs[0] += 0.5 * a * amp1;
      if (j - 1 >= 1) bump.coeffs[j - 2] -= 0.25 * a * amp1;
      bump.coeffs[j] += 0.25 * a * amp1;
    }
    bumps[n] = bump;
  }
  auto sup_at = [&](double c) {
    double s = 0.0;
    for (int n = 0; n <= N; ++n) s = std::max(s, (floor_field + c * bumps[n]).l2_norm());
    return s;
  };
  double lo = 0.0, hi = 1.0;
  while (sup_at(hi) < alpha) hi *= 2.0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (sup_at(mid) < alpha ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  Trajectory u(problem.grid, M);
  for (int n = 0; n <= N; ++n) u.values[n] = floor_field + c * bumps[n];
  return u;
}

namespace {

double simpson_fn(const TimeFn& f, double a, double b, int n) {
  n += n % 2;
  double h = (b - a) / n, acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * f(a + i * h);
  }
  return acc * h / 3.0;
}

double min_on_grid(const TimeFn& f, double a, double b, int n) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) m = std::min(m, f(a + i * (b - a) / n));
  return m;
}

double nodal_min_diff(const SpectralField& a, const SpectralField& b, int X) {
  auto va = to_nodal(a, X), vb = to_nodal(b, X);
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < va.size(); ++i) m = std::min(m, va[i] - vb[i]);
  return m;
}

}  // namespace

AuditReport audit(const ProblemSpec& problem, double t0, int samples, std::uint64_t seed) {
  problem.validate();
  if (!(t0 > 0.0) || t0 > 1.0)
    throw std::domain_error("audit: t0 must lie in (0,1]");
  if (problem.F.kind == NonlinearitySpec::Kind::Custom)
    throw AuditUnavailableError(
        "audit: no lower bound derivable for a custom nonlinearity");

  const int M = problem.modes();
  const int N = problem.grid.intervals();
  const int X = problem.eval_grid();
  const double alpha = problem.alpha;
  const double b = problem.beta.beta;

  AuditReport rep;
  rep.t0 = t0;
  rep.seed = seed;

  // (f2): analytic bound and gamma_alpha
  rep.gamma_alpha = Trajectory(problem.grid, M);
  if (problem.F.kind == NonlinearitySpec::Kind::Example1) {
    double rho_l1 = simpson_fn(problem.F.rho, 0.0, 1.0, 2000);
    rep.M_alpha = rho_l1 * problem.F.phi0.l2_norm() + problem.F.sigma_sup * std::sqrt(M_PI);
    for (int n = 0; n <= N; ++n)
      rep.gamma_alpha.values[n] = problem.F.rho(problem.grid.nodes[n]) * problem.F.phi0;
  }

  // (h1): N_alpha and Phi_alpha per nonlocal kind
  bool h1_structural = true;
  SpectralField e1f = SpectralField::e1(M);
  switch (problem.H.kind) {
    case NonlocalSpec::Kind::Integral: {
      double omega0 = min_on_grid(problem.H.omega, 0.0, 1.0, 4000);
      rep.N_alpha = simpson_fn([&](double t) { return std::fabs(problem.H.omega(t)); },
                               0.0, 1.0, 2000) * alpha;
      if (omega0 <= 0.0) {
        h1_structural = false;  // omega(s) >= omega_0 > 0 is required
        rep.Phi_alpha = SpectralField(M);
      } else {
        rep.Phi_alpha = (omega0 * alpha * problem.cone.sigma_cone) * e1f;
      }
      break;
    }
    case NonlocalSpec::Kind::Multipoint: {
      double csum = 0.0;
      for (auto& [t, c] : problem.H.points) csum += c;
      rep.N_alpha = csum * alpha;
      if (csum <= 0.0) h1_structural = false;
      rep.Phi_alpha = (csum * alpha * problem.cone.sigma_cone) * e1f;
      break;
    }
    case NonlocalSpec::Kind::Periodic:
      rep.N_alpha = alpha;
      rep.Phi_alpha = (alpha * problem.cone.sigma_cone) * e1f;
      break;
    case NonlocalSpec::Kind::Fixed:
      rep.N_alpha = problem.H.u0.l2_norm();
      rep.Phi_alpha = problem.H.u0;
      break;
  }

  // (h2): || S_beta(t0) Phi_alpha + int_0^{t0} (t0-r)^{beta-1} T_beta(t0-r) gamma(r) dr ||
  {
    TimeGrid sub;
    sub.kind = TimeGrid::Kind::Graded;  // bypass the [0,1] uniform step helper
    sub.nodes.resize(N + 1);
    for (int j = 0; j <= N; ++j) sub.nodes[j] = t0 * double(j) / N;
    auto W = build_weights(problem.beta, sub);
    SpectralField acc = sbeta_apply(problem.generator, problem.beta, t0, rep.Phi_alpha);
    if (problem.F.kind == NonlinearitySpec::Kind::Example1) {
      for (int m = 0; m < M; ++m) {
        double s = 0.0;
        for (int j = 0; j <= N; ++j) {
          double lag = t0 - sub.nodes[j];
          double mult = ml(b, b, -problem.generator.mu[m] * std::pow(lag, b),
                           lattice_ml_config());
          s += W.w[N][j] * mult * problem.F.rho(sub.nodes[j]) * problem.F.phi0.coeffs[m];
        }
        acc.coeffs[m] += s;
      }
    }
    rep.b_t0 = acc.l2_norm();
  }
  rep.passed_h2 = rep.b_t0 > rep.audit_floor;

  // boundary sampling for the (f2)/(h1) order bounds
  std::uint64_t rng = seed ^ 0x5deece66dull;
  rep.f2_min_margin = std::numeric_limits<double>::infinity();
  rep.h1_min_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Trajectory u = sample_cone_boundary(problem, rng);
    for (int n = 0; n <= N; ++n) {
      SpectralField Fv = eval_F(problem.F, problem.grid.nodes[n], u.values[n], X);
      rep.sampled_F_max = std::max(rep.sampled_F_max, Fv.l2_norm());
      rep.f2_min_margin =
          std::min(rep.f2_min_margin, nodal_min_diff(Fv, rep.gamma_alpha.values[n], X));
    }
    SpectralField Hu = eval_H(problem.H, u);
    rep.h1_min_margin = std::min(rep.h1_min_margin, nodal_min_diff(Hu, rep.Phi_alpha, X));
  }
  if (samples == 0) {
    rep.f2_min_margin = 0.0;
    rep.h1_min_margin = 0.0;
  }

  const double tol = problem.cone.pos_tol;
  rep.passed_f2 = rep.f2_min_margin >= -tol && rep.sampled_F_max <= rep.M_alpha + 1e-9;
  rep.passed_h1 = h1_structural && rep.h1_min_margin >= -tol;
  return rep;
}

}  // namespace frheat
