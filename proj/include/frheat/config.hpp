#ifndef FRHEAT_CONFIG_HPP
#define FRHEAT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frheat/eigensolve.hpp"

namespace frheat {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Sectioned key=value run configuration; unknown sections/keys are rejected.
struct RunConfig {
  std::map<std::string, std::string> entries;  // "section.key" -> value
  std::uint64_t config_hash = 0;

  ProblemSpec build_problem() const;
  SolveOptions solver_options() const;
  std::vector<double> alphas() const;  // problem.alphas if set, else {problem.alpha}
  std::uint64_t seed() const;
  bool refine_check() const;
  double audit_t0() const;
  int audit_samples() const;
  std::string output_dir() const;
  int output_precision() const;
  int threads() const;

  bool has(const std::string& dotted) const;
  std::string get(const std::string& dotted, const std::string& fallback) const;
  double get_num(const std::string& dotted, double fallback) const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace frheat

#endif
