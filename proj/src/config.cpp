#include "frheat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace frheat {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem.beta",        "problem.modes",       "problem.time_nodes",
      "problem.alpha",       "problem.alphas",      "problem.grid",
      "problem.gamma",
      "nonlinearity.kind",   "nonlinearity.rho",    "nonlinearity.rho_value",
      "nonlinearity.sigma",  "nonlinearity.sigma_value", "nonlinearity.phi0",
      "nonlinearity.eval_grid",
      "nonlocal.kind",       "nonlocal.omega",      "nonlocal.omega_value",
      "nonlocal.omega_a",    "nonlocal.omega_b",    "nonlocal.points",
      "nonlocal.u0",
      "cone.sigma_cone",     "cone.pos_tol",
      "solver.tol",          "solver.max_iter",     "solver.damping",
      "solver.seed",         "solver.refine_check", "solver.t0",
      "solver.audit_samples",
      "output.dir",          "output.precision",    "output.threads",
  };
  return keys;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double parse_num(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::string canonical;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key=value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config: key '" + key + "' outside any section");
    std::string dotted = section + "." + key;
    if (!known_keys().count(dotted))
      throw ConfigError("config: unknown key '" + dotted + "'");
    if (cfg.entries.count(dotted))
      throw ConfigError("config: duplicate key '" + dotted + "'");
    cfg.entries[dotted] = val;
  }
  for (const auto& [k, v] : cfg.entries) canonical += k + "=" + v + "\n";
  cfg.config_hash = fnv64(canonical);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

bool RunConfig::has(const std::string& dotted) const { return entries.count(dotted) > 0; }

std::string RunConfig::get(const std::string& dotted, const std::string& fallback) const {
  auto it = entries.find(dotted);
  return it == entries.end() ? fallback : it->second;
}

double RunConfig::get_num(const std::string& dotted, double fallback) const {
  auto it = entries.find(dotted);
  return it == entries.end() ? fallback : parse_num(dotted, it->second);
}

ProblemSpec RunConfig::build_problem() const {
  ProblemSpec p;
  try {
    p.beta = FracOrder(get_num("problem.beta", 0.5));
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  int modes = (int)get_num("problem.modes", 64);
  int N = (int)get_num("problem.time_nodes", 256);
  if (modes < 1) throw ConfigError("config: problem.modes must be >= 1");
  if (N < 1) throw ConfigError("config: problem.time_nodes must be >= 1");
  p.generator = DiagonalGenerator::dirichlet_laplacian(modes);

  std::string gridkind = get("problem.grid", "uniform");
  if (gridkind == "uniform") {
    p.grid = TimeGrid::uniform(N);
  } else if (gridkind == "graded") {
    double gamma = get_num("problem.gamma", 2.0 / p.beta.beta);
    p.grid = TimeGrid::graded(N, gamma);
  } else {
    throw ConfigError("config: problem.grid must be uniform or graded");
  }

  p.alpha = get_num("problem.alpha", 1.0);

  std::string fk = get("nonlinearity.kind", "example1");
  if (fk == "zero") {
    p.F = NonlinearitySpec::zero();
  } else if (fk == "example1") {
    std::string rk = get("nonlinearity.rho", "expdecay");
    TimeFn rho;
    double rho_min;
    if (rk == "expdecay") {
      rho = [](double t) { return std::exp(-t); };
      rho_min = std::exp(-1.0);
    } else if (rk == "one") {
      rho = [](double) { return 1.0; };
      rho_min = 1.0;
    } else if (rk == "const") {
      double v = get_num("nonlinearity.rho_value", 1.0);
      rho = [v](double) { return v; };
      rho_min = v;
    } else {
      throw ConfigError("config: nonlinearity.rho must be expdecay, one or const");
    }
    std::string sk = get("nonlinearity.sigma", "cospi2");
    TimeFn sig;
    double sig_sup;
    if (sk == "cospi2") {
      sig = [](double t) { double c = std::cos(M_PI * t); return c * c; };
      sig_sup = 1.0;
    } else if (sk == "zero") {
      sig = [](double) { return 0.0; };
      sig_sup = 0.0;
    } else if (sk == "const") {
      double v = get_num("nonlinearity.sigma_value", 1.0);
      sig = [v](double) { return v; };
      sig_sup = v;
    } else {
      throw ConfigError("config: nonlinearity.sigma must be cospi2, zero or const");
    }
    SpectralField phi0(modes);
    std::string pk = get("nonlinearity.phi0", "sinx");
    if (pk == "sinx")
      phi0.coeffs[0] = std::sqrt(M_PI / 2.0);
    else if (pk == "e1")
      phi0.coeffs[0] = 1.0;
    else
      throw ConfigError("config: nonlinearity.phi0 must be sinx or e1");
    p.F = NonlinearitySpec::example1(rho, sig, phi0, rho_min, sig_sup);
  } else if (fk == "custom") {
    p.F.kind = NonlinearitySpec::Kind::Custom;
    p.F.custom = [](double, const std::vector<double>& v) {
      std::vector<double> out(v.size());
      for (size_t i = 0; i < v.size(); ++i) {
        double x = std::max(v[i], 0.0);
        out[i] = x * x / (1.0 + x * x);
      }
      return out;
    };
  } else {
    throw ConfigError("config: nonlinearity.kind must be zero, example1 or custom");
  }
  p.F.eval_grid = (int)get_num("nonlinearity.eval_grid", 0);

  std::string hk = get("nonlocal.kind", "integral");
  if (hk == "integral") {
    std::string ok = get("nonlocal.omega", "const");
    if (ok == "const") {
      double v = get_num("nonlocal.omega_value", 1.0);
      p.H = NonlocalSpec::integral([v](double) { return v; });
    } else if (ok == "affine") {
      double a = get_num("nonlocal.omega_a", 1.0);
      double b = get_num("nonlocal.omega_b", 0.0);
      p.H = NonlocalSpec::integral([a, b](double t) { return a * t + b; });
    } else {
      throw ConfigError("config: nonlocal.omega must be const or affine");
    }
  } else if (hk == "multipoint") {
    std::vector<std::pair<double, double>> pts;
    std::istringstream ss(get("nonlocal.points", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("config: nonlocal.points entries must look like t:c");
      pts.emplace_back(parse_num("nonlocal.points", trim(item.substr(0, colon))),
                       parse_num("nonlocal.points", trim(item.substr(colon + 1))));
    }
    if (pts.empty()) throw ConfigError("config: nonlocal.points is empty");
    p.H = NonlocalSpec::multipoint(std::move(pts));
  } else if (hk == "periodic") {
    p.H = NonlocalSpec::periodic();
  } else if (hk == "fixed") {
    std::string uk = get("nonlocal.u0", "e1");
    if (uk != "e1") throw ConfigError("config: nonlocal.u0 must be e1");
    p.H = NonlocalSpec::fixed(SpectralField::e1(modes));
  } else {
    throw ConfigError("config: nonlocal.kind must be integral, multipoint, periodic or fixed");
  }

  p.cone.sigma_cone = get_num("cone.sigma_cone", 0.1);
  p.cone.pos_tol = get_num("cone.pos_tol", 1e-8);
  p.cone.e1 = SpectralField::e1(modes);
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return p;
}

SolveOptions RunConfig::solver_options() const {
  SolveOptions o;
  o.tol = get_num("solver.tol", 1e-10);
  o.max_iter = (int)get_num("solver.max_iter", 200);
  o.damping = get_num("solver.damping", 1.0);
  if (!(o.tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
  if (o.max_iter < 1) throw ConfigError("config: solver.max_iter must be >= 1");
  if (!(o.damping > 0.0) || o.damping > 1.0)
    throw ConfigError("config: solver.damping must lie in (0,1]");
  return o;
}

std::vector<double> RunConfig::alphas() const {
  std::vector<double> out;
  if (has("problem.alphas")) {
    std::istringstream ss(get("problem.alphas", ""));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_num("problem.alphas", trim(item)));
    if (out.empty()) throw ConfigError("config: problem.alphas is empty");
  } else {
    out.push_back(get_num("problem.alpha", 1.0));
  }
  return out;
}

std::uint64_t RunConfig::seed() const { return (std::uint64_t)get_num("solver.seed", 0); }

bool RunConfig::refine_check() const {
  std::string v = get("solver.refine_check", "false");
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config: solver.refine_check must be true or false");
}

double RunConfig::audit_t0() const { return get_num("solver.t0", 1.0); }
int RunConfig::audit_samples() const { return (int)get_num("solver.audit_samples", 100); }
std::string RunConfig::output_dir() const { return get("output.dir", "out"); }

int RunConfig::output_precision() const {
  int p = (int)get_num("output.precision", 17);
  if (p < 1 || p > 17) throw ConfigError("config: output.precision must lie in [1,17]");
  return p;
}

int RunConfig::threads() const { return (int)get_num("output.threads", 1); }

}  // namespace frheat
