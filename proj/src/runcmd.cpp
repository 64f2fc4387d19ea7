#include "roadfield/runcmd.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "roadfield/analysis.hpp"
#include "roadfield/evolve.hpp"
#include "roadfield/rayleigh.hpp"

namespace roadfield {

using nlohmann::json;

json config_echo(const RunConfig& c) {
  json j;
  j["road"] = {{"D", c.D},  {"c", c.c},  {"mu1", c.mu1}, {"mu2", c.mu2},
               {"nu1", c.nu1}, {"nu2", c.nu2}, {"f_expr", c.f_expr}};
  j["field1"] = {{"d", c.field1.d}, {"c", c.field1.c},
                 {"a_expr", c.field1.a_expr}, {"a_bound", c.field1.a_bound}};
  j["field2"] = {{"d", c.field2.d}, {"c", c.field2.c},
                 {"a_expr", c.field2.a_expr}, {"a_bound", c.field2.a_bound}};
  j["grid"] = {{"R", c.R}, {"h", c.h}, {"shape", c.shape}};
  j["solver"] = {{"tol", c.tol},
                 {"max_iter", c.max_iter},
                 {"shift", c.shift},
                 {"drift_scheme", c.drift_scheme},
                 {"linear_solver", c.linear_solver},
                 {"allow_peclet_violation", c.allow_peclet_violation}};
  j["study"] = {{"seed", c.seed},
                {"radii", c.radii},
                {"sweep_path", c.sweep_path},
                {"sweep_values", c.sweep_values},
                {"harnack_draws", c.harnack_draws},
                {"harnack_r", c.harnack_r},
                {"harnack_refine", c.harnack_refine},
                {"decay_rho", c.decay_rho},
                {"decay_beta", c.decay_beta}};
  j["evolve"] = {{"dt", c.dt},
                 {"steps", c.steps},
                 {"burn_in", c.burn_in},
                 {"initial", c.initial}};
  j["output"] = {{"path", c.path}, {"format", c.format}};
  return j;
}

namespace {

struct CheckFailure {
  std::string check;
  std::string message;
};

// ResultDocument invariant: every numeric field is finite
void check_finite(const json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw SolveError("non-finite value in results at " + where);
  if (j.is_object())
    for (const auto& [k, v] : j.items()) check_finite(v, where + "." + k);
  if (j.is_array())
    for (const auto& v : j) check_finite(v, where + "[]");
}

std::string csv_table(const std::vector<double>& axis,
                      const std::vector<double>& lambdas,
                      const std::vector<double>& residuals,
                      const std::vector<int>& iterations) {
  std::ostringstream os;
  os << "index,parameter_or_radius,lambda,residual,iterations\n";
  os.precision(17);
  for (std::size_t i = 0; i < axis.size(); ++i)
    os << i << ',' << axis[i] << ',' << lambdas[i] << ',' << residuals[i]
       << ',' << iterations[i] << '\n';
  return os.str();
}

json eig_results(const EigenResult& r, int N) {
  json out{{"lambda", r.lambda},
           {"residual", r.residual},
           {"iterations", r.iterations},
           {"positivity_margin", r.positivity_margin},
           {"N", N}};
  if (r.bracket_low) out["bracket_low"] = *r.bracket_low;
  if (r.bracket_high) out["bracket_high"] = *r.bracket_high;
  return out;
}

}  // namespace

RunOutcome run_command(const std::string& command, const RunConfig& cfg,
                       bool dump_eigenvector) {
  RunOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  json results;
  std::optional<CheckFailure> failed;

  try {
    const ProblemParams params = cfg.problem_params();
    const SolverConfig scfg = cfg.solver_config();

    if (command == "eig") {
      const TruncatedGrid grid = cfg.make_grid();
      const SystemMatrix sys =
          assemble(grid, params, cfg.drift(), cfg.allow_peclet_violation);
      const EigenResult r = principal_eig(sys, scfg);
      results = eig_results(r, sys.n());
      results["peclet_ok"] = sys.peclet_ok;
      results["zmatrix_ok"] = sys.zmatrix_ok;
      results["scheme_used"] = to_string(sys.scheme_used);
      if (dump_eigenvector) {
        out.eigenvector = r.vector;
        out.dump_sidecar = {
            {"R", grid.R()},
            {"h", grid.h()},
            {"shape", to_string(grid.shape())},
            {"N", grid.size()},
            {"road_count", grid.road_count()},
            {"field_count_per_side", grid.field_count()},
            {"ordering",
             "road left-to-right, then field side 1 row-major bottom-up, "
             "then field side 2"}};
      }
    } else if (command == "oracle") {
      const TruncatedGrid grid = cfg.make_grid();
      const SystemMatrix sys =
          assemble(grid, params, cfg.drift(), cfg.allow_peclet_violation);
      const EigenResult it = principal_eig(sys, scfg);
      const EigenResult dn = dense_principal_eig(sys);
      const double diff = std::fabs(it.lambda - dn.lambda);
      results["lambda_iterative"] = it.lambda;
      results["lambda_dense"] = dn.lambda;
      results["difference"] = diff;
      results["gap"] = dn.spectral_gap_hint ? json(*dn.spectral_gap_hint) : json();
      results["N"] = sys.n();
      if (diff > 1e-8 * (1.0 + std::fabs(dn.lambda)))
        failed = CheckFailure{"oracle.equivalence",
                              "iterative and dense eigenvalues disagree"};
    } else if (command == "bounds") {
      const TruncatedGrid grid = cfg.make_grid();
      const BoundsReport rep = bounds_check(grid, params, scfg);
      results = {{"lower", rep.lower},
                 {"upper_road", rep.upper_road},
                 {"upper_dirichlet", {rep.upper_dirichlet[0], rep.upper_dirichlet[1]}},
                 {"lambda", rep.lambda},
                 {"satisfied",
                  {{"lower", rep.lower_ok},
                   {"upper_road", rep.lambda <= rep.upper_road + 1e-6},
                   {"upper_dirichlet",
                    rep.lambda <= std::min(rep.upper_dirichlet[0],
                                           rep.upper_dirichlet[1]) + 1e-6}}},
                 {"margin_road", rep.margin_road},
                 {"margin_dirichlet", {rep.margin_dirichlet[0], rep.margin_dirichlet[1]}}};
      if (!rep.lower_ok)
        failed = CheckFailure{"bounds.lower",
                              "lambda fell below the finite-R lower bound"};
    } else if (command == "converge") {
      const ConvergenceReport rep = converge_in_R(
          params, cfg.radii, cfg.h, shape_from_string(cfg.shape), scfg);
      results = {{"radii", rep.radii},
                 {"lambdas", rep.lambdas},
                 {"monotone_violation", rep.monotone_violation}};
      if (rep.extrapolated_limit) results["extrapolated_limit"] = *rep.extrapolated_limit;
      if (rep.fit_exponent) results["fit_exponent"] = *rep.fit_exponent;
      out.csv = csv_table(rep.radii, rep.lambdas, rep.residuals, rep.iterations);
      const double scale = 1.0 + std::fabs(rep.lambdas.back());
      if (rep.monotone_violation > 10.0 * cfg.h * cfg.h * scale)
        failed = CheckFailure{"converge.monotone",
                              "lambda_1^R rose beyond the discretization allowance"};
    } else if (command == "sweep") {
      const TruncatedGrid grid = cfg.make_grid();
      const SweepReport rep =
          sweep(params, cfg.sweep_path, cfg.sweep_values, grid, scfg);
      results = {{"path", rep.path},
                 {"values", rep.values},
                 {"lambdas", rep.lambdas},
                 {"max_difference_quotient", rep.max_difference_quotient}};
      if (rep.monotone_ok) results["monotone_ok"] = *rep.monotone_ok;
      out.csv = csv_table(rep.values, rep.lambdas, rep.residuals, rep.iterations);
      if (rep.monotone_ok && !*rep.monotone_ok)
        failed = CheckFailure{"sweep.monotone",
                              "monotonicity guaranteed by theory was violated"};
    } else if (command == "harnack") {
      const HarnackReport rep = harnack_study(
          params, cfg.seed, cfg.harnack_draws, cfg.R, cfg.harnack_r, cfg.h,
          shape_from_string(cfg.shape), scfg, cfg.harnack_refine);
      results = {{"r", rep.r},
                 {"R", rep.R},
                 {"n_draws", rep.n_draws},
                 {"ratios", rep.ratios},
                 {"lambdas", rep.lambdas},
                 {"max_ratio", rep.max_ratio}};
      if (rep.refinement_drift) results["refinement_drift"] = *rep.refinement_drift;
      for (double ratio : rep.ratios)
        if (!(ratio >= 1.0) || !std::isfinite(ratio))
          failed = CheckFailure{"harnack.ratio",
                                "a Harnack ratio was not finite and >= 1"};
    } else if (command == "decay") {
      const ConvergenceReport conv = converge_in_R(
          params, cfg.radii, cfg.h, shape_from_string(cfg.shape), scfg);
      const double lam_est = conv.lambdas.back();
      const TruncatedGrid grid = cfg.make_grid();
      const ConditionStrictReport cond =
          check_condition_strict(params, grid, lam_est);
      results["condition_strict"] = {{"ok", cond.ok},
                                     {"outer_sup", {cond.outer_sup[0], cond.outer_sup[1]}},
                                     {"lambda_estimate", cond.lambda_estimate},
                                     {"margin", cond.margin}};
      if (!cond.ok)
        throw AnalysisError(
            "condition strict unverified: the decay envelope hypothesis "
            "needs outer sup a_i < -lambda_1 and lambda_1 <= 0");
      const SystemMatrix sys = assemble(grid, params, cfg.drift());
      const EigenResult eig = principal_eig(sys, scfg);
      const DecayEnvelope env =
          decay_envelope(params, cfg.decay_rho_ladder(), cfg.decay_beta_ladder(),
                         grid, eig, scfg);
      results["feasible"] = env.feasible;
      if (env.feasible) {
        results["rho"] = env.rho;
        results["alpha"] = env.alpha;
        results["beta"] = env.beta;
        results["gamma1"] = env.gamma[0];
        results["gamma2"] = env.gamma[1];
        results["prefactor"] = env.prefactor;
        results["max_violation"] = env.max_violation;
        results["violations"] = env.violations;
        results["road_check_beta"] = env.road_check_beta;
        results["road_check_nobeta"] = env.road_check_nobeta;
        if (env.worst_node)
          results["worst_node"] = {(*env.worst_node)[0], (*env.worst_node)[1]};
        if (env.violations > 0)
          failed = CheckFailure{"decay.domination",
                                "the envelope failed to dominate the eigenfunction"};
      }
    } else if (command == "evolve") {
      const TruncatedGrid grid = cfg.make_grid();
      const SystemMatrix sys = assemble(grid, params, cfg.drift());
      const EigenResult eig = principal_eig(sys, scfg);
      std::vector<double> x0(grid.size(), 1.0);
      if (cfg.initial == "eigenvector") {
        x0 = eig.vector;
      } else if (cfg.initial == "bump") {
        for (int k = 1; k <= 2 * grid.n() - 1; ++k) {
          const double x = grid.road_x(k);
          x0[grid.road_index(k)] = std::exp(-x * x);
        }
        for (int side = 0; side < 2; ++side)
          for (int local = 0; local < grid.field_count(); ++local) {
            const auto nd = grid.field_nodes()[local];
            const double x = grid.field_x(nd), y = grid.field_y(nd);
            x0[grid.field_index(side, local)] = std::exp(-x * x - y * y);
          }
      }
      const Trajectory traj =
          run_trajectory(sys.A, x0, cfg.dt, cfg.steps,
                         linear_solver_from_string(cfg.linear_solver));
      const double rate = decay_rate(traj, cfg.burn_in);
      const double rel =
          std::fabs(rate - eig.lambda) / std::max(1e-30, std::fabs(eig.lambda));
      results = {{"rate", rate},
                 {"lambda_ref", eig.lambda},
                 {"relative_error", rel}};
      // the 2% contract is meaningless when lambda is numerically zero
      if (rel > 0.02 && std::fabs(eig.lambda) > 1e-6)
        failed = CheckFailure{"evolve.rate",
                              "decay rate disagrees with lambda_1^R beyond 2%"};
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    check_finite(results, "results");
  } catch (const ParseError& e) {
    out.exit_code = 1;
    out.document["error"] = {{"kind", "parse"},
                             {"message", e.what()},
                             {"offset", e.offset},
                             {"expected", e.expected}};
  } catch (const ConfigError& e) {
    out.exit_code = 1;
    json err{{"kind", "config"}, {"message", e.what()}};
    if (!e.key.empty()) err["key"] = e.key;
    out.document["error"] = err;
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.document["error"] = {{"kind", "numerical"}, {"message", e.what()}};
  }

  if (failed && out.exit_code == 0) {
    out.exit_code = 2;
    out.document["error"] = {{"kind", "invariant"},
                             {"check", failed->check},
                             {"message", failed->message}};
  }

  const auto t1 = std::chrono::steady_clock::now();
  out.document["schema_version"] = kSchemaVersion;
  out.document["command"] = command;
  out.document["config_echo"] = config_echo(cfg);
  out.document["results"] = results;
  out.document["timings_ms"] = {
      {"total",
       std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
           1000.0}};
  out.document["tool_version"] = kToolVersion;
  return out;
}

}  // namespace roadfield
