#ifndef ROADFIELD_CONFIG_HPP
#define ROADFIELD_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadfield/assembly.hpp"
#include "roadfield/eigsolve.hpp"
#include "roadfield/params.hpp"

namespace roadfield {

struct ConfigError : std::runtime_error {
  std::string key;  // offending key path, when known
  explicit ConfigError(const std::string& msg, std::string k = "")
      : std::runtime_error(msg), key(std::move(k)) {}
};

// Effective run configuration: sections and scalar keys of the config file.
struct RunConfig {
  // [road]
  double D = 1.0, c = 0.0;
  double mu1 = 1.0, mu2 = 1.0, nu1 = 1.0, nu2 = 1.0;
  std::string f_expr;  // empty = no road potential

  // [field1] / [field2]
  struct FieldCfg {
    double d = 1.0, c = 0.0;
    std::string a_expr = "0";
    double a_bound = 1.0;
  } field1, field2;

  // [grid]
  double R = 10.0, h = 0.25;
  std::string shape = "halfdisk";

  // [solver]
  double tol = 1e-10;
  int max_iter = 10000;
  std::string shift = "auto";  // "auto" or a number
  std::string drift_scheme = "auto";
  std::string linear_solver = "auto";
  bool allow_peclet_violation = false;

  // [study]
  std::uint64_t seed = 1234;
  std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
  std::string sweep_path = "D";
  std::vector<double> sweep_values{0.5, 1.0, 2.0, 4.0};
  int harnack_draws = 20;
  double harnack_r = 2.0;
  bool harnack_refine = true;
  std::vector<double> decay_rho;   // empty = {R/8, R/4, R/2}
  std::vector<double> decay_beta;  // empty = {1, 1/2, ..., 2^-10}

  // [evolve]
  double dt = 0.02;
  int steps = 1000;
  double burn_in = 0.5;
  std::string initial = "ones";  // ones | eigenvector | bump

  // [output]
  std::string path;    // empty = stdout only
  std::string format = "json";  // json | csv (csv adds a projection)

  void set(const std::string& key_path, const std::string& value);
  void validate() const;

  ProblemParams problem_params() const;
  SolverConfig solver_config() const;
  TruncatedGrid make_grid() const { return TruncatedGrid(R, h, shape_from_string(shape)); }
  DriftScheme drift() const { return drift_scheme_from_string(drift_scheme); }
  std::vector<double> decay_rho_ladder() const;
  std::vector<double> decay_beta_ladder() const;
};

// Parses the sectioned key-value config text. Unknown keys are an error.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// key=value overrides using dotted paths, applied after the file parse.
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides);

}  // namespace roadfield

#endif
