#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frheat/config.hpp"
#include "frheat/report.hpp"

namespace {

using namespace frheat;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  bool out_set = false;
  int threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

class Timer {
public:
  explicit Timer(std::string label)
      : label_(std::move(label)), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::fprintf(stderr, "[timing] %s: %.3f s\n", label_.c_str(), dt);
  }

private:
  std::string label_;
  std::chrono::steady_clock::time_point t0_;
};

RunConfig load_or_default(const GlobalOpts& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  return cfg;
}

std::string resolve_out(const GlobalOpts& g, const RunConfig& cfg) {
  return g.out_set ? g.out_dir : cfg.output_dir();
}

std::uint64_t resolve_seed(const GlobalOpts& g, const RunConfig& cfg) {
  return g.seed_set ? g.seed : cfg.seed();
}

int cmd_ml(const GlobalOpts& g, double a, double b, double zmin, double zmax, double step) {
  Timer timer("ml");
  if (step <= 0.0) throw std::domain_error("ml: step must be positive");
  if (zmax < zmin) throw std::domain_error("ml: z_max must be >= z_min");
  if (zmax > 0.0) throw std::domain_error("ml: grid must stay on z <= 0");
  RunConfig cfg = load_or_default(g);
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);

  Table t;
  t.header = {"z", "ml"};
  int n = (int)std::floor((zmax - zmin) / step + 1e-12);
  for (int i = 0; i <= n; ++i) {
    double z = std::min(zmin + i * step, 0.0);
    t.add_row({format_g(z, prec), format_g(ml(a, b, z), prec)});
  }
  write_file(out, "ml.csv", t.to_csv());
  write_manifest(out, {"ml.csv"});
  return 0;
}

int cmd_density(const GlobalOpts& g, double beta_v, double tau_max, int points) {
  Timer timer("density");
  if (points < 2) throw std::domain_error("density: points must be >= 2");
  FracOrder beta(beta_v);
  RunConfig cfg = load_or_default(g);
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);

  double cap = density_tau_max(beta);
  double tmax = tau_max > 0.0 ? std::min(tau_max, cap) : std::min(3.0, cap);

  Table t;
  t.header = {"tau", "k_beta"};
  for (int i = 0; i < points; ++i) {
    double tau = tmax * i / (points - 1);
    t.add_row({format_g(tau, prec), format_g(density_k(beta, tau), prec)});
  }
  DensityMoments m = density_moments(beta);
  Table mt;
  mt.header = {"m0", "m1", "m1_expected", "tail_bound"};
  mt.add_row({format_g(m.m0, prec), format_g(m.m1, prec),
              format_g(1.0 / gamma_fn(1.0 + beta.beta), prec), format_g(m.tail_bound, prec)});
  write_file(out, "density.csv", t.to_csv());
  write_file(out, "density_moments.csv", mt.to_csv());
  write_manifest(out, {"density.csv", "density_moments.csv"});
  return 0;
}

void append_audit_rows(Table& t, const AuditReport& rep, int prec) {
  t.add_row({"M_alpha", format_g(rep.M_alpha, prec)});
  t.add_row({"N_alpha", format_g(rep.N_alpha, prec)});
  t.add_row({"b_t0", format_g(rep.b_t0, prec)});
  t.add_row({"t0", format_g(rep.t0, prec)});
  t.add_row({"audit_floor", format_g(rep.audit_floor, prec)});
  t.add_row({"sampled_F_max", format_g(rep.sampled_F_max, prec)});
  t.add_row({"f2_min_margin", format_g(rep.f2_min_margin, prec)});
  t.add_row({"h1_min_margin", format_g(rep.h1_min_margin, prec)});
  t.add_row({"passed_f2", rep.passed_f2 ? "true" : "false"});
  t.add_row({"passed_h1", rep.passed_h1 ? "true" : "false"});
  t.add_row({"passed_h2", rep.passed_h2 ? "true" : "false"});
  t.add_row({"seed", std::to_string(rep.seed)});
}

int cmd_audit(const GlobalOpts& g) {
  Timer timer("audit");
  RunConfig cfg = load_or_default(g);
  ProblemSpec p = cfg.build_problem();
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);

  Table t;
  t.header = {"quantity", "value"};
  try {
    AuditReport rep = audit(p, cfg.audit_t0(), cfg.audit_samples(), resolve_seed(g, cfg));
    append_audit_rows(t, rep, prec);
    write_file(out, "audit.csv", t.to_csv());
    write_manifest(out, {"audit.csv"});
    if (!rep.passed()) {
      std::fprintf(stderr, "audit: hypothesis check failed (f2=%d h1=%d h2=%d)\n",
                   (int)rep.passed_f2, (int)rep.passed_h1, (int)rep.passed_h2);
      return 4;
    }
  } catch (const AuditUnavailableError& e) {
    t.add_row({"audit_unavailable", e.what()});
    write_file(out, "audit.csv", t.to_csv());
    write_manifest(out, {"audit.csv"});
    std::fprintf(stderr, "audit: %s\n", e.what());
    return 4;
  }
  return 0;
}

std::string trajectory_csv(const ProblemSpec& p, const Trajectory& u, int prec) {
  const int X = p.eval_grid();
  Table t;
  t.header = {"t", "x", "u"};
  for (size_t n = 0; n < u.values.size(); ++n) {
    std::vector<double> vals = to_nodal(u.values[n], X);
    for (int i = 1; i < X; ++i)
      t.add_row({format_g(u.grid.nodes[n], prec), format_g(i * M_PI / X, prec),
                 format_g(vals[i - 1], prec)});
  }
  return t.to_csv();
}

std::string history_csv(const EigenpairResult& r, int prec) {
  Table t;
  t.header = {"iter", "lambda", "step_norm", "damping"};
  for (const auto& rec : r.history)
    t.add_row({std::to_string(rec.iter), format_g(rec.lambda, prec),
               format_g(rec.step_norm, prec), format_g(rec.damping, prec)});
  return t.to_csv();
}

Table summary_table(const RunConfig& cfg, const ProblemSpec& p, const EigenpairResult& r,
                    const GlobalOpts& g, int prec) {
  Table t;
  t.header = {"quantity", "value"};
  t.add_row({"config_hash", hash_hex(cfg.config_hash)});
  t.add_row({"alpha", format_g(r.alpha, prec)});
  t.add_row({"lambda", format_g(r.lambda, prec)});
  t.add_row({"fixed_point_residual", format_g(r.fixed_point_residual, prec)});
  t.add_row({"iterations", std::to_string(r.history.size())});
  t.add_row({"converged", r.converged ? "true" : "false"});
  t.add_row({"seed_profile", r.seed_profile});
  t.add_row({"sup_norm", format_g(r.u.sup_norm(), prec)});
  ConeReport cone = cone_check(r.u, p.cone, p.eval_grid());
  t.add_row({"cone_member", cone.member ? "true" : "false"});
  t.add_row({"nodal_nonneg", cone.nonneg ? "true" : "false"});
  t.add_row({"worst_cone_margin", format_g(cone.worst_margin, prec)});
  try {
    AuditReport rep = audit(p, cfg.audit_t0(), cfg.audit_samples(),
                            resolve_seed(g, cfg));
    t.add_row({"audit_f2", rep.passed_f2 ? "true" : "false"});
    t.add_row({"audit_h1", rep.passed_h1 ? "true" : "false"});
    t.add_row({"audit_h2", rep.passed_h2 ? "true" : "false"});
  } catch (const AuditUnavailableError&) {
    t.add_row({"audit_f2", "unavailable"});
    t.add_row({"audit_h1", "unavailable"});
    t.add_row({"audit_h2", "unavailable"});
  }
  return t;
}

int cmd_eigen(const GlobalOpts& g) {
  Timer timer("eigen");
  RunConfig cfg = load_or_default(g);
  ProblemSpec p = cfg.build_problem();
  SolveOptions opts = cfg.solver_options();
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);
  double alpha = cfg.alphas().front();

  EigenpairResult res;
  bool failed = false;
  try {
    res = solve_eigenpair(p, alpha, opts);
  } catch (const NonConvergence& e) {
    res = e.best_iterate;
    failed = true;
    std::fprintf(stderr, "eigen: %s\n", e.what());
  }

  Table summary = summary_table(cfg, p, res, g, prec);
  std::vector<std::string> files = {"summary.csv", "trajectory.csv", "lambda_curve.csv"};
  if (!failed && cfg.refine_check()) {
    Timer t2("eigen refine check");
    ProblemSpec fine = p;
    int N2 = 2 * p.grid.intervals();
    fine.grid = p.grid.is_uniform() ? TimeGrid::uniform(N2) : TimeGrid::graded(N2, p.grid.gamma);
    fine.generator = DiagonalGenerator::dirichlet_laplacian(2 * p.modes());
    fine.cone.e1 = SpectralField::e1(2 * p.modes());
    SpectralField phi0(2 * p.modes());
    for (int m = 0; m < p.modes(); ++m) phi0.coeffs[m] = p.F.phi0.modes() ? p.F.phi0.coeffs[m] : 0.0;
    fine.F.phi0 = phi0;
    if (fine.H.kind == NonlocalSpec::Kind::Fixed)
      fine.H.u0 = SpectralField::e1(2 * p.modes());
    EigenpairResult res2 = solve_eigenpair(fine, alpha, opts);
    double gap = std::abs(res2.lambda - res.lambda) / std::abs(res2.lambda);
    Table c;
    c.header = {"lambda_coarse", "lambda_fine", "rel_gap"};
    c.add_row({format_g(res.lambda, prec), format_g(res2.lambda, prec), format_g(gap, prec)});
    write_file(out, "comparison.csv", c.to_csv());
    files.push_back("comparison.csv");
  }
  write_file(out, "summary.csv", summary.to_csv());
  write_file(out, "trajectory.csv", trajectory_csv(p, res.u, prec));
  write_file(out, "lambda_curve.csv", history_csv(res, prec));
  write_manifest(out, files);
  return failed ? 3 : 0;
}

int cmd_sweep(const GlobalOpts& g) {
  Timer timer("sweep");
  RunConfig cfg = load_or_default(g);
  ProblemSpec p = cfg.build_problem();
  SolveOptions opts = cfg.solver_options();
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);

  std::vector<SweepPoint> pts = continuation_in_alpha(p, cfg.alphas(), opts);
  Table t;
  t.header = {"alpha", "lambda", "residual", "iterations", "sup_norm", "converged", "error"};
  bool all_ok = true;
  for (const auto& pt : pts) {
    all_ok = all_ok && pt.ok;
    t.add_row({format_g(pt.alpha, prec), format_g(pt.result.lambda, prec),
               format_g(pt.result.fixed_point_residual, prec),
               std::to_string(pt.result.history.size()),
               format_g(pt.result.u.values.empty() ? 0.0 : pt.result.u.sup_norm(), prec),
               pt.ok ? "true" : "false", pt.error});
  }
  write_file(out, "sweep.csv", t.to_csv());
  write_manifest(out, {"sweep.csv"});
  if (!all_ok) std::fprintf(stderr, "sweep: some alphas failed to converge\n");
  return all_ok ? 0 : 3;
}

int cmd_convergence(const GlobalOpts& g, double beta_v) {
  Timer timer("convergence");
  FracOrder beta(beta_v);
  RunConfig cfg = load_or_default(g);
  int prec = cfg.output_precision();
  std::string out = resolve_out(g, cfg);

  // benchmark problem: single mode mu = 1, zero forcing, lambda = 0 — the
  // decaying trajectory E_beta(-t^beta) e1 solves it exactly
  ProblemSpec bench;
  bench.beta = beta;
  bench.generator = DiagonalGenerator::dirichlet_laplacian(1);
  bench.F = NonlinearitySpec::zero();
  bench.H = NonlocalSpec::fixed(SpectralField::e1(1));
  bench.cone.e1 = SpectralField::e1(1);

  Table t;
  t.header = {"N", "max_error", "l1_residual", "order"};
  double prev_err = 0.0;
  for (int N : {32, 64, 128, 256}) {
    // solution error on the graded mesh that compensates the t^beta layer;
    // L1 residual on the uniform mesh its weights are built for
    TimeGrid graded = TimeGrid::graded(N, 2.0 / beta.beta);
    std::vector<double> y = solve_scalar_relaxation(beta, graded);
    double err = 0.0;
    for (int n = 1; n <= N; ++n)
      err = std::max(err, std::abs(y[n] - ml1(beta.beta,
                                              -std::pow(graded.nodes[n], beta.beta))));

    TimeGrid grid = TimeGrid::uniform(N);
    std::vector<double> yu = solve_scalar_relaxation(beta, grid);
    Trajectory u(grid, 1);
    for (int n = 0; n <= N; ++n) u.values[n].coeffs[0] = yu[n];
    bench.grid = grid;
    CaputoResidual r = caputo_l1_residual(bench, u, 0.0);
    double order = prev_err > 0.0 ? std::log2(prev_err / err) : 0.0;
    t.add_row({std::to_string(N), format_g(err, prec), format_g(r.time_l2, prec),
               format_g(order, prec)});
    prev_err = err;
  }

  // classical limit sanity: E_beta(-t^beta) -> e^{-t} as beta -> 1
  Table s;
  s.header = {"beta", "t", "ml_value", "exp_value", "abs_diff"};
  double bl = 0.999;
  double v = ml1(bl, -std::pow(1.0, bl));
  s.add_row({format_g(bl, prec), format_g(1.0, prec), format_g(v, prec),
             format_g(std::exp(-1.0), prec), format_g(std::abs(v - std::exp(-1.0)), prec)});

  write_file(out, "convergence.csv", t.to_csv());
  write_file(out, "classical_limit.csv", s.to_csv());
  write_manifest(out, {"convergence.csv", "classical_limit.csv"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Caputo evolution eigenpair solver"};
  app.require_subcommand(1);
  app.fallthrough();  // let --config/--out/--threads/--seed follow the subcommand

  GlobalOpts g;
  app.add_option("--config", g.config_path, "Run configuration file");
  auto* out_opt = app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads for mode loops");
  auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed for audit sampling");

  double ml_a = 0.5, ml_b = 1.0, ml_zmin = -5.0, ml_zmax = 0.0, ml_step = 0.1;
  auto* ml_cmd = app.add_subcommand("ml", "Tabulate E_{a,b}(z) on a z grid");
  ml_cmd->add_option("--a", ml_a);
  ml_cmd->add_option("--b", ml_b);
  ml_cmd->add_option("--zmin", ml_zmin);
  ml_cmd->add_option("--zmax", ml_zmax);
  ml_cmd->add_option("--step", ml_step);

  double de_beta = 0.5, de_taumax = 0.0;
  int de_points = 301;
  auto* de_cmd = app.add_subcommand("density", "Tabulate k_beta and its moments");
  de_cmd->add_option("--beta", de_beta);
  de_cmd->add_option("--tau-max", de_taumax);
  de_cmd->add_option("--points", de_points);

  auto* audit_cmd = app.add_subcommand("audit", "Check hypotheses (f2), (h1), (h2)");
  auto* eigen_cmd = app.add_subcommand("eigen", "Solve one normalized eigenpair");
  auto* sweep_cmd = app.add_subcommand("sweep", "Continuation over alpha values");

  double cv_beta = 0.5;
  auto* cv_cmd = app.add_subcommand("convergence", "Linear-benchmark refinement study");
  cv_cmd->add_option("--beta", cv_beta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  g.out_set = out_opt->count() > 0;
  g.seed_set = seed_opt->count() > 0;
  if (g.threads < 1) {
    std::fprintf(stderr, "error: --threads must be >= 1\n");
    return 2;
  }
  frheat::set_num_threads(g.threads);

  try {
    if (*ml_cmd) return cmd_ml(g, ml_a, ml_b, ml_zmin, ml_zmax, ml_step);
    if (*de_cmd) return cmd_density(g, de_beta, de_taumax, de_points);
    if (*audit_cmd) return cmd_audit(g);
    if (*eigen_cmd) return cmd_eigen(g);
    if (*sweep_cmd) return cmd_sweep(g);
    if (*cv_cmd) return cmd_convergence(g, cv_beta);
  } catch (const frheat::NonConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const frheat::AuditUnavailableError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
