#include "frheat/mild.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace frheat {

namespace {
std::atomic<int> g_threads{1};

void parallel_for(int count, const std::function<void(int)>& body) {
  int k = std::min(g_threads.load(), count);
  if (k <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (int t = 0; t < k; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}
}  // namespace

void set_num_threads(int k) { g_threads = std::max(1, k); }
int num_threads() { return g_threads; }

TimeGrid TimeGrid::uniform(int N) {
  if (N < 1) throw std::domain_error("TimeGrid: need at least one interval");
  TimeGrid g;
  g.kind = Kind::Uniform;
  g.nodes.resize(N + 1);
  for (int j = 0; j <= N; ++j) g.nodes[j] = double(j) / N;
  g.nodes[0] = 0.0;
  g.nodes[N] = 1.0;
  return g;
}

TimeGrid TimeGrid::graded(int N, double gamma) {
  if (N < 1) throw std::domain_error("TimeGrid: need at least one interval");
  if (!(gamma >= 1.0)) throw std::domain_error("TimeGrid: grading exponent must be >= 1");
  TimeGrid g;
  g.kind = Kind::Graded;
  g.gamma = gamma;
  g.nodes.resize(N + 1);
  for (int j = 0; j <= N; ++j) g.nodes[j] = std::pow(double(j) / N, gamma);
  g.nodes[0] = 0.0;
  g.nodes[N] = 1.0;
  return g;
}

double TimeGrid::step() const {
  if (!is_uniform()) throw std::logic_error("TimeGrid::step: uniform grid required");
  return 1.0 / intervals();
}

Trajectory::Trajectory(TimeGrid g, int modes) : grid(std::move(g)) {
  values.assign(grid.nodes.size(), SpectralField(modes));
}

double Trajectory::sup_norm() const {
  double s = 0.0;
  for (const auto& f : values) s = std::max(s, f.l2_norm());
  return s;
}

double Trajectory::sup_dist(const Trajectory& o) const {
  if (o.values.size() != values.size())
    throw std::invalid_argument("Trajectory: grid mismatch");
  double s = 0.0;
  for (size_t n = 0; n < values.size(); ++n) s = std::max(s, (values[n] - o.values[n]).l2_norm());
  return s;
}

Trajectory Trajectory::constant(TimeGrid g, const SpectralField& f) {
  Trajectory u;
  u.grid = std::move(g);
  u.values.assign(u.grid.nodes.size(), f);
  return u;
}

VolterraWeights build_weights(FracOrder beta, const TimeGrid& grid) {
  const double b = beta.beta;
  const int N = grid.intervals();
  VolterraWeights W{beta, grid, {}};
  W.w.resize(N + 1);
  W.w[0] = {0.0};
  for (int n = 1; n <= N; ++n) {
    W.w[n].assign(n + 1, 0.0);
    const double tn = grid.nodes[n];
    for (int j = 0; j < n; ++j) {
      const double B = tn - grid.nodes[j];
      const double A = tn - grid.nodes[j + 1];
      const double dt = grid.nodes[j + 1] - grid.nodes[j];
      // I0 = int_cell (tn-s)^{b-1} ds, I1 = int_cell (tn-s)^{b-1} (s - t_j) ds
      const double I0 = (std::pow(B, b) - std::pow(A, b)) / b;
      const double I1 = B * I0 - (std::pow(B, b + 1.0) - std::pow(A, b + 1.0)) / (b + 1.0);
      W.w[n][j] += I0 - I1 / dt;
      W.w[n][j + 1] += I1 / dt;
    }
  }
  return W;
}

Trajectory volterra_apply(const DiagonalGenerator& g, FracOrder beta,
                          const VolterraWeights& W, const Trajectory& forcing,
                          const MLEvalConfig& cfg) {
  if (W.grid.nodes != forcing.grid.nodes)
    throw std::invalid_argument("volterra_apply: forcing not on the weight grid");
  const int N = forcing.grid.intervals();
  const int M = forcing.modes();
  const double b = beta.beta;
  Trajectory out(forcing.grid, M);

  if (forcing.grid.is_uniform()) {
    const double h = forcing.grid.step();
    parallel_for(M, [&](int m) {
      std::vector<double> mult(N + 1);
      for (int l = 0; l <= N; ++l)
        mult[l] = ml(b, b, -g.mu[m] * std::pow(l * h, b), cfg);
      for (int n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (int j = 0; j <= n; ++j)
          acc += W.w[n][j] * mult[n - j] * forcing.values[j].coeffs[m];
        out.values[n].coeffs[m] = acc;
      }
    });
  } else {
    parallel_for(M, [&](int m) {
      for (int n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
          double lag = forcing.grid.nodes[n] - forcing.grid.nodes[j];
          acc += W.w[n][j] * ml(b, b, -g.mu[m] * std::pow(lag, b), cfg) *
                 forcing.values[j].coeffs[m];
        }
        out.values[n].coeffs[m] = acc;
      }
    });
  }
  return out;
}

std::vector<double> solve_scalar_relaxation(FracOrder beta, const TimeGrid& grid) {
  const VolterraWeights W = build_weights(beta, grid);
  const int N = grid.intervals();
  const double rg = 1.0 / gamma_fn(beta.beta);  // E_{b,b}(0), the mu = 0 multiplier
  std::vector<double> y(N + 1);
  y[0] = 1.0;
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += W.w[n][j] * y[j];
    y[n] = (1.0 - rg * acc) / (1.0 + rg * W.w[n][n]);
  }
  return y;
}

ConeReport cone_check(const Trajectory& u, const ConeSpec& cone, int X) {
  cone.validate();
  const double sup = u.sup_norm();
  const auto e1_nodal = to_nodal(cone.e1, X);
  ConeReport r;
  r.member = true;
  r.nonneg = true;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& f : u.values) {
    auto vals = to_nodal(f, X);
    double margin = std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < vals.size(); ++i) {
      margin = std::min(margin, vals[i] - cone.sigma_cone * sup * e1_nodal[i]);
      mn = std::min(mn, vals[i]);
    }
    r.margin.push_back(margin);
    r.min_val.push_back(mn);
    r.worst_margin = std::min(r.worst_margin, margin);
    if (margin < -cone.pos_tol) r.member = false;
    if (mn < -cone.pos_tol) r.nonneg = false;
  }
  return r;
}

}  // namespace frheat
