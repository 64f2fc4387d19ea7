#include "roadfield/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace roadfield {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + key + ", got '" + v + "'", key);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return (int)x;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer for " + key + ", got '" + v + "'", key);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean for " + key + ", got '" + v + "'", key);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for " + key, key);
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = unquote(trim(raw));
  auto field = [&](FieldCfg& f, const std::string& sub) {
    if (sub == "d") f.d = parse_double(key, v);
    else if (sub == "c") f.c = parse_double(key, v);
    else if (sub == "a_expr") f.a_expr = v;
    else if (sub == "a_bound") f.a_bound = parse_double(key, v);
    else throw ConfigError("unknown config key '" + key + "'", key);
  };

  const std::size_t dot = key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("config key '" + key + "' is missing its section", key);
  const std::string sec = key.substr(0, dot);
  const std::string sub = key.substr(dot + 1);

  if (sec == "road") {
    if (sub == "D") D = parse_double(key, v);
    else if (sub == "c") c = parse_double(key, v);
    else if (sub == "mu1") mu1 = parse_double(key, v);
    else if (sub == "mu2") mu2 = parse_double(key, v);
    else if (sub == "nu1") nu1 = parse_double(key, v);
    else if (sub == "nu2") nu2 = parse_double(key, v);
    else if (sub == "f_expr") f_expr = v;
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else if (sec == "field1") {
    field(field1, sub);
  } else if (sec == "field2") {
    field(field2, sub);
  } else if (sec == "grid") {
    if (sub == "R") R = parse_double(key, v);
    else if (sub == "h") h = parse_double(key, v);
    else if (sub == "shape") shape = v;
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else if (sec == "solver") {
    if (sub == "tol") tol = parse_double(key, v);
    else if (sub == "max_iter") max_iter = parse_int(key, v);
    else if (sub == "shift") shift = v;
    else if (sub == "drift_scheme") drift_scheme = v;
    else if (sub == "linear_solver") linear_solver = v;
    else if (sub == "allow_peclet_violation") allow_peclet_violation = parse_bool(key, v);
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else if (sec == "study") {
    if (sub == "seed") seed = (std::uint64_t)std::stoull(v);
    else if (sub == "radii") radii = parse_list(key, v);
    else if (sub == "sweep_path") sweep_path = v;
    else if (sub == "sweep_values") sweep_values = parse_list(key, v);
    else if (sub == "harnack_draws") harnack_draws = parse_int(key, v);
    else if (sub == "harnack_r") harnack_r = parse_double(key, v);
    else if (sub == "harnack_refine") harnack_refine = parse_bool(key, v);
    else if (sub == "decay_rho") decay_rho = parse_list(key, v);
    else if (sub == "decay_beta") decay_beta = parse_list(key, v);
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else if (sec == "evolve") {
    if (sub == "dt") dt = parse_double(key, v);
    else if (sub == "steps") steps = parse_int(key, v);
    else if (sub == "burn_in") burn_in = parse_double(key, v);
    else if (sub == "initial") initial = v;
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else if (sec == "output") {
    if (sub == "path") path = v;
    else if (sub == "format") format = v;
    else throw ConfigError("unknown config key '" + key + "'", key);
  } else {
    throw ConfigError("unknown config section '" + sec + "'", key);
  }
}

void RunConfig::validate() const {
  auto positive = [](double x, const std::string& key) {
    if (!(x > 0.0))
      throw ConfigError(key + " must be strictly positive", key);
  };
  positive(D, "road.D");
  positive(mu1, "road.mu1");
  positive(mu2, "road.mu2");
  positive(nu1, "road.nu1");
  positive(nu2, "road.nu2");
  positive(field1.d, "field1.d");
  positive(field2.d, "field2.d");
  positive(R, "grid.R");
  positive(h, "grid.h");
  positive(tol, "solver.tol");
  if (max_iter < 1) throw ConfigError("solver.max_iter must be >= 1", "solver.max_iter");
  shape_from_string(shape);
  drift_scheme_from_string(drift_scheme);
  linear_solver_from_string(linear_solver);
  if (shift != "auto") parse_double("solver.shift", shift);
  if (format != "json" && format != "csv")
    throw ConfigError("output.format must be json or csv", "output.format");
  if (initial != "ones" && initial != "eigenvector" && initial != "bump")
    throw ConfigError("evolve.initial must be ones, eigenvector or bump",
                      "evolve.initial");
  if (!(burn_in >= 0.0 && burn_in < 1.0))
    throw ConfigError("evolve.burn_in must be in [0, 1)", "evolve.burn_in");
  positive(dt, "evolve.dt");
  if (steps < 1) throw ConfigError("evolve.steps must be >= 1", "evolve.steps");
  if (harnack_draws < 1)
    throw ConfigError("study.harnack_draws must be >= 1", "study.harnack_draws");
  // re-validate physical positivity through ProblemParams, and parse the
  // coefficient expressions so malformed text is reported at load time
  problem_params();
}

ProblemParams RunConfig::problem_params() const {
  ProblemParams p;
  p.D = D;
  p.c = c;
  p.mu = {mu1, mu2};
  p.nu = {nu1, nu2};
  // ParseError propagates intact so callers can report kind and byte offset
  p.side[0] = SideParams{field1.d, field1.c,
                         CoefficientField(field1.a_expr, field1.a_bound)};
  p.side[1] = SideParams{field2.d, field2.c,
                         CoefficientField(field2.a_expr, field2.a_bound)};
  if (!f_expr.empty()) p.f = CoefficientField(f_expr, 1e30);
  try {
    p.validate();
  } catch (const ParamError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.tol = tol;
  s.max_iter = max_iter;
  if (shift != "auto") s.shift = parse_double("solver.shift", shift);
  s.linear_solver = linear_solver_from_string(linear_solver);
  return s;
}

std::vector<double> RunConfig::decay_rho_ladder() const {
  if (!decay_rho.empty()) return decay_rho;
  return {R / 8.0, R / 4.0, R / 2.0};
}

std::vector<double> RunConfig::decay_beta_ladder() const {
  if (!decay_beta.empty()) return decay_beta;
  std::vector<double> out;
  for (int m = 0; m <= 10; ++m) out.push_back(std::pow(2.0, -m));
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = std::min(line.find('#'), line.find(';'));
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any [section]");
    cfg.set(section + "." + key, value);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  RunConfig cfg = path.empty() ? RunConfig{} : parse_config_file(path);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + ov + "' is not of the form key=value");
    cfg.set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

}  // namespace roadfield
