#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(FRHEAT_CLI_PATH) + " " + args + " 2>/dev/null";
  int st = std::system(cmd.c_str());
  REQUIRE(st >= 0);
  return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("frheat_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

// Parse a csv column by header name into doubles (non-numeric cells skipped).
std::vector<std::string> column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  int idx = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) idx = (int)i;
  REQUIRE(idx >= 0);
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string cell;
    for (int i = 0; i <= idx; ++i) std::getline(r, cell, ',');
    out.push_back(cell);
  }
  return out;
}

std::string kv(const std::string& csv, const std::string& key) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    auto c = line.find(',');
    if (c != std::string::npos && line.substr(0, c) == key) return line.substr(c + 1);
  }
  FAIL("missing summary key ", key);
  return "";
}

const char* kRemarkCfg = R"([problem]
beta = 0.5
modes = 24
time_nodes = 96
alpha = 1

[nonlinearity]
kind = example1

[nonlocal]
kind = integral
omega = const
omega_value = 1

[solver]
tol = 1e-10
seed = 42
)";

}  // namespace

TEST_CASE("ml table matches the exponential") {
  fs::path d = fresh_dir("ml");
  CHECK(run_cli("ml --a 1 --b 1 --zmin -5 --zmax 0 --step 0.5 --out " + d.string()) == 0);
  std::string csv = slurp(d / "ml.csv");
  auto zs = column(csv, "z");
  auto vs = column(csv, "ml");
  REQUIRE(zs.size() == 11);
  for (size_t i = 0; i < zs.size(); ++i)
    CHECK(std::stod(vs[i]) ==
          doctest::Approx(std::exp(std::stod(zs[i]))).epsilon(1e-12));
  CHECK(fs::exists(d / "manifest.csv"));
}

TEST_CASE("ml rejects a nonpositive step with exit 2") {
  fs::path d = fresh_dir("mlbad");
  CHECK(run_cli("ml --a 0.5 --step 0 --out " + d.string()) == 2);
  CHECK(run_cli("ml --a 1.5 --out " + d.string()) == 2);  // a outside (0,1]
}

TEST_CASE("unknown config key fails with exit 2") {
  fs::path d = fresh_dir("cfgbad");
  write(d / "bad.cfg", "[problem]\nbeta = 0.5\nbogus_key = 1\n");
  CHECK(run_cli("eigen --config " + (d / "bad.cfg").string() + " --out " + d.string()) ==
        2);
  write(d / "bad2.cfg", "[problem]\nbeta = 1.5\n");
  CHECK(run_cli("eigen --config " + (d / "bad2.cfg").string() + " --out " + d.string()) ==
        2);
  CHECK(run_cli("eigen --config " + (d / "missing.cfg").string()) == 2);
}

TEST_CASE("density emits the half-order Gaussian profile") {
  fs::path d = fresh_dir("density");
  CHECK(run_cli("density --beta 0.5 --tau-max 3 --points 31 --out " + d.string()) == 0);
  std::string csv = slurp(d / "density.csv");
  auto taus = column(csv, "tau");
  auto ks = column(csv, "k_beta");
  for (size_t i = 0; i < taus.size(); ++i) {
    double tau = std::stod(taus[i]);
    CHECK(std::stod(ks[i]) ==
          doctest::Approx(std::exp(-tau * tau / 4.0) / std::sqrt(M_PI)).epsilon(1e-8));
  }
  std::string mom = slurp(d / "density_moments.csv");
  CHECK(std::stod(column(mom, "m0")[0]) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("audit passes on the Remark config and fails on sign-changing omega") {
  fs::path d = fresh_dir("audit");
  write(d / "remark.cfg", kRemarkCfg);
  CHECK(run_cli("audit --config " + (d / "remark.cfg").string() + " --out " +
                d.string()) == 0);
  std::string csv = slurp(d / "audit.csv");
  CHECK(kv(csv, "passed_f2") == "true");
  CHECK(kv(csv, "passed_h1") == "true");
  CHECK(kv(csv, "passed_h2") == "true");
  CHECK(std::stod(kv(csv, "b_t0")) >= 0.0427);

  std::string bad = kRemarkCfg;
  bad.replace(bad.find("omega = const\nomega_value = 1"), 29,
              "omega = affine\nomega_a = 1\nomega_b = -0.5");
  write(d / "signchange.cfg", bad);
  CHECK(run_cli("audit --config " + (d / "signchange.cfg").string() + " --out " +
                d.string()) == 4);
  CHECK(kv(slurp(d / "audit.csv"), "passed_h1") == "false");

  std::string custom = kRemarkCfg;
  custom.replace(custom.find("kind = example1"), 15, "kind = custom");
  write(d / "custom.cfg", custom);
  CHECK(run_cli("audit --config " + (d / "custom.cfg").string() + " --out " +
                d.string()) == 4);
}

TEST_CASE("eigen run emits a consistent bundle") {
  fs::path d = fresh_dir("eigen");
  write(d / "remark.cfg", kRemarkCfg);
  CHECK(run_cli("eigen --config " + (d / "remark.cfg").string() + " --out " +
                (d / "r1").string()) == 0);
  std::string s = slurp(d / "r1/summary.csv");
  CHECK(kv(s, "converged") == "true");
  CHECK(std::stod(kv(s, "lambda")) > 0.0);
  CHECK(std::stod(kv(s, "fixed_point_residual")) <= 1e-8);
  CHECK(std::fabs(std::stod(kv(s, "sup_norm")) - 1.0) <= 1e-10);
  CHECK(kv(s, "nodal_nonneg") == "true");
  CHECK(kv(s, "audit_h2") == "true");
  CHECK(fs::exists(d / "r1/trajectory.csv"));
  CHECK(fs::exists(d / "r1/lambda_curve.csv"));
  CHECK(fs::exists(d / "r1/manifest.csv"));
}

TEST_CASE("eigen is bit-for-bit deterministic for a fixed seed and one thread") {
  fs::path d = fresh_dir("determinism");
  write(d / "remark.cfg", kRemarkCfg);
  for (const char* sub : {"a", "b"})
    CHECK(run_cli("eigen --config " + (d / "remark.cfg").string() + " --threads 1 --out " +
                  (d / sub).string()) == 0);
  for (const char* f : {"summary.csv", "trajectory.csv", "lambda_curve.csv",
                        "manifest.csv"})
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
}

TEST_CASE("eigen exits 3 on forced non-convergence and dumps the best iterate") {
  fs::path d = fresh_dir("nonconv");
  write(d / "hard.cfg", std::string(kRemarkCfg) + "max_iter = 1\n");
  CHECK(run_cli("eigen --config " + (d / "hard.cfg").string() + " --out " +
                d.string()) == 3);
  std::string s = slurp(d / "summary.csv");
  CHECK(kv(s, "converged") == "false");
  CHECK(fs::exists(d / "trajectory.csv"));
}

TEST_CASE("sweep normalizes every alpha") {
  fs::path d = fresh_dir("sweep");
  std::string cfg = kRemarkCfg;
  cfg += "\n[output]\nprecision = 17\n";
  cfg.insert(cfg.find("alpha = 1") + 9, "\nalphas = 0.5,1,1.5");
  write(d / "sweep.cfg", cfg);
  CHECK(run_cli("sweep --config " + (d / "sweep.cfg").string() + " --out " +
                d.string()) == 0);
  std::string csv = slurp(d / "sweep.csv");
  auto alphas = column(csv, "alpha");
  auto sups = column(csv, "sup_norm");
  auto lambdas = column(csv, "lambda");
  REQUIRE(alphas.size() == 3);
  for (size_t i = 0; i < alphas.size(); ++i) {
    CHECK(std::fabs(std::stod(sups[i]) - std::stod(alphas[i])) <= 1e-10);
    CHECK(std::stod(lambdas[i]) > 0.0);
  }
}

TEST_CASE("convergence table certifies the linear benchmark") {
  fs::path d = fresh_dir("conv");
  CHECK(run_cli("convergence --beta 0.5 --out " + d.string()) == 0);
  std::string csv = slurp(d / "convergence.csv");
  auto errs = column(csv, "max_error");
  auto resids = column(csv, "l1_residual");
  auto orders = column(csv, "order");
  REQUIRE(errs.size() == 4);
  CHECK(std::stod(errs[3]) <= 2e-3);
  for (size_t i = 1; i < 4; ++i) {
    CHECK(std::stod(resids[i]) < std::stod(resids[i - 1]));
    CHECK(std::stod(orders[i]) >= 1.0);
  }
  CHECK(std::stod(resids[3]) <= 5e-2);
  std::string lim = slurp(d / "classical_limit.csv");
  CHECK(std::stod(column(lim, "abs_diff")[0]) <= 2e-2);
}

TEST_CASE("missing subcommand exits 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
}
