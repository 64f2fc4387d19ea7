#include "roadfield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "roadfield/assembly.hpp"

namespace roadfield {

EigenResult dirichlet_eig(const TruncatedGrid& grid, const ProblemParams& params,
                          int side, const SolverConfig& cfg) {
  const SparseMatrix A = assemble_dirichlet_field(grid, params, side);
  return principal_eig(A, cfg);
}

BoundsReport bounds_check(const TruncatedGrid& grid, const ProblemParams& params,
                          const SolverConfig& cfg) {
  BoundsReport rep;
  const double sup1 = sup_on_grid(params.side[0].a, grid);
  const double sup2 = sup_on_grid(params.side[1].a, grid);
  rep.lower = std::min({0.0, -sup1, -sup2});
  rep.upper_road = params.c * params.c / (4.0 * params.D) + params.mu[0] + params.mu[1];
  for (int i = 0; i < 2; ++i)
    rep.upper_dirichlet[i] = dirichlet_eig(grid, params, i, cfg).lambda;
  rep.lambda = principal_eig(assemble(grid, params), cfg).lambda;
  rep.lower_ok = rep.lambda >= rep.lower - 1e-10 * (1.0 + std::fabs(rep.lower));
  rep.margin_road = rep.lambda - rep.upper_road;
  for (int i = 0; i < 2; ++i)
    rep.margin_dirichlet[i] = rep.lambda - rep.upper_dirichlet[i];
  return rep;
}

namespace {

// least-squares fit lambda_i = lambda_inf + C * R_i^(-p) over a p grid
void fit_truncation_tail(const std::vector<double>& radii,
                         const std::vector<double>& lambdas,
                         std::optional<double>& limit,
                         std::optional<double>& exponent) {
  const std::size_t n = radii.size();
  const std::size_t m = std::max<std::size_t>(3, n / 2);
  if (n < 3) return;
  const std::size_t start = n - m;
  double best_err = std::numeric_limits<double>::infinity();
  for (double p = 0.25; p <= 6.0 + 1e-9; p += 0.05) {
    // linear LSQ in (lambda_inf, C) for fixed p
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = start; i < n; ++i) {
      const double xi = std::pow(radii[i], -p);
      const double yi = lambdas[i];
      s1 += 1; sx += xi; sxx += xi * xi; sy += yi; sxy += xi * yi;
    }
    const double det = s1 * sxx - sx * sx;
    if (std::fabs(det) < 1e-30) continue;
    const double lam_inf = (sxx * sy - sx * sxy) / det;
    const double C = (s1 * sxy - sx * sy) / det;
    double err = 0;
    for (std::size_t i = start; i < n; ++i) {
      const double r = lambdas[i] - lam_inf - C * std::pow(radii[i], -p);
      err += r * r;
    }
    if (err < best_err) {
      best_err = err;
      limit = lam_inf;
      exponent = p;
    }
  }
}

}  // namespace

ConvergenceReport converge_in_R(const ProblemParams& params,
                                const std::vector<double>& radii, double h,
                                Shape shape, const SolverConfig& cfg) {
  if (radii.empty()) throw AnalysisError("empty radius ladder");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw AnalysisError("radii must be strictly increasing");
  ConvergenceReport rep;
  for (double R : radii) {
    const TruncatedGrid grid(R, h, shape);
    const EigenResult res = principal_eig(assemble(grid, params), cfg);
    rep.radii.push_back(R);
    rep.lambdas.push_back(res.lambda);
    rep.residuals.push_back(res.residual);
    rep.iterations.push_back(res.iterations);
  }
  rep.monotone_violation = 0.0;
  for (std::size_t i = 1; i < rep.lambdas.size(); ++i)
    rep.monotone_violation =
        std::max(rep.monotone_violation, rep.lambdas[i] - rep.lambdas[i - 1]);
  fit_truncation_tail(rep.radii, rep.lambdas, rep.extrapolated_limit,
                      rep.fit_exponent);
  return rep;
}

ProblemParams apply_parameter(const ProblemParams& base, const std::string& path,
                              double value) {
  ProblemParams p = base;
  if (path == "D") p.D = value;
  else if (path == "c") p.c = value;
  else if (path == "d1") p.side[0].d = value;
  else if (path == "d2") p.side[1].d = value;
  else if (path == "c1") p.side[0].c = value;
  else if (path == "c2") p.side[1].c = value;
  else if (path == "mu1") p.mu[0] = value;
  else if (path == "mu2") p.mu[1] = value;
  else if (path == "nu1") p.nu[0] = value;
  else if (path == "nu2") p.nu[1] = value;
  else if (path == "a_shift1" || path == "a_shift2") {
    const int side = path == "a_shift1" ? 0 : 1;
    const CoefficientField& a = base.side[side].a;
    Expression shifted = Expression::make_binary(
        '+', a.expression(), Expression::make_number(value));
    p.side[side].a = CoefficientField(std::move(shifted),
                                      a.declared_bound() + std::fabs(value));
  } else {
    throw AnalysisError("unknown sweep path '" + path + "'");
  }
  return p;
}

SweepReport sweep(const ProblemParams& params, const std::string& path,
                  const std::vector<double>& values, const TruncatedGrid& grid,
                  const SolverConfig& cfg) {
  if (values.empty()) throw AnalysisError("empty sweep value list");
  SweepReport rep;
  rep.path = path;
  for (double v : values) {
    const ProblemParams p = apply_parameter(params, path, v);
    const EigenResult res = principal_eig(assemble(grid, p), cfg);
    rep.values.push_back(v);
    rep.lambdas.push_back(res.lambda);
    rep.residuals.push_back(res.residual);
    rep.iterations.push_back(res.iterations);
  }
  rep.max_difference_quotient = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double dp = values[i] - values[i - 1];
    if (dp != 0.0)
      rep.max_difference_quotient =
          std::max(rep.max_difference_quotient,
                   std::fabs(rep.lambdas[i] - rep.lambdas[i - 1]) / std::fabs(dp));
  }
  // monotonicity is guaranteed only without drift
  if (params.driftless() &&
      (path == "D" || path == "d1" || path == "d2" || path == "a_shift1" ||
       path == "a_shift2")) {
    const bool increasing = path == "D" || path == "d1" || path == "d2";
    bool ok = true;
    for (std::size_t i = 1; i < rep.lambdas.size(); ++i) {
      const bool up = values[i] > values[i - 1];
      const double diff = rep.lambdas[i] - rep.lambdas[i - 1];
      const double signed_diff = up == increasing ? diff : -diff;
      if (signed_diff < -1e-8) ok = false;
    }
    rep.monotone_ok = ok;
  }
  return rep;
}

ConditionStrictReport check_condition_strict(const ProblemParams& params,
                                             const TruncatedGrid& grid,
                                             double lambda_estimate,
                                             double margin) {
  ConditionStrictReport rep;
  rep.lambda_estimate = lambda_estimate;
  const double r = grid.R() / 2.0;
  for (int i = 0; i < 2; ++i)
    rep.outer_sup[i] = sup_on_region(params.side[i].a, grid, Region::Outer, r);
  rep.margin = std::min(-lambda_estimate - rep.outer_sup[0],
                        -lambda_estimate - rep.outer_sup[1]);
  rep.ok = lambda_estimate <= 0.0 && rep.margin > margin;
  return rep;
}

StrictProbeResult strict_monotonicity_probe(const ProblemParams& params,
                                            const CoefficientField& bump,
                                            const TruncatedGrid& grid,
                                            bool condition_verified,
                                            const SolverConfig& cfg) {
  StrictProbeResult out;
  out.condition_verified = condition_verified;
  out.lambda_base = principal_eig(assemble(grid, params), cfg).lambda;

  ProblemParams bumped = params;
  const CoefficientField& a = params.side[0].a;
  Expression sum = Expression::make_binary('+', a.expression(), bump.expression());
  bumped.side[0].a = CoefficientField(
      std::move(sum), a.declared_bound() + bump.declared_bound());
  out.lambda_bumped = principal_eig(assemble(grid, bumped), cfg).lambda;
  out.margin = out.lambda_base - out.lambda_bumped;
  return out;
}

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// 0.3 .. 1.0 amplitude, six cosine modes with |frequency| <= 1, tapered to
// the unfavorable constant -1 outside the core radius 8
std::string cosine_sum(std::mt19937_64& rng, bool road_only) {
  std::uniform_real_distribution<double> uamp(0.3, 1.0);
  std::uniform_real_distribution<double> ufreq(-1.0, 1.0);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * M_PI);
  const int terms = 6;
  const double amp = uamp(rng);
  std::string raw = "(";
  for (int m = 0; m < terms; ++m) {
    const double p = ufreq(rng);
    const double q = road_only ? 0.0 : ufreq(rng);
    const double phi = uphase(rng);
    if (m) raw += " + ";
    raw += "cos(" + format_g(p) + "*x";
    if (!road_only) raw += " + " + format_g(q) + "*y";
    raw += " + " + format_g(phi) + ")";
  }
  raw += ")";
  const std::string scale = format_g(amp / terms);
  const std::string rr = road_only ? "abs(x)" : "sqrt(x^2 + y^2)";
  const std::string window = "(0.5 - 0.5*tanh(0.5*(" + rr + " - 8)))";
  if (road_only)
    return scale + "*" + raw + "*" + window;
  return scale + "*" + raw + "*" + window + " - (1 - " + window + ")";
}

}  // namespace

HarnackDrawExprs harnack_draw(std::uint64_t seed, int draw_index) {
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (std::uint64_t)(draw_index + 1));
  HarnackDrawExprs d;
  d.f = cosine_sum(rng, /*road_only=*/true);
  d.g1 = cosine_sum(rng, false);
  d.g2 = cosine_sum(rng, false);
  return d;
}

double harnack_ratio(const TruncatedGrid& grid, std::span<const double> vec,
                     double r) {
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 2 * grid.n() - 1; ++k) {
    if (std::fabs(grid.road_x(k)) > r) continue;
    const double v = vec[grid.road_index(k)];
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  }
  for (int side = 0; side < 2; ++side) {
    for (int local = 0; local < grid.field_count(); ++local) {
      const auto nd = grid.field_nodes()[local];
      const double x = grid.field_x(nd), y = grid.field_y(nd);
      if (x * x + y * y > r * r) continue;
      const double v = vec[grid.field_index(side, local)];
      sup = std::max(sup, v);
      inf = std::min(inf, v);
    }
  }
  if (!(inf > 0.0))
    throw AnalysisError("non-positive specimen on the inner compact");
  return sup / inf;
}

namespace {

std::vector<double> harnack_ratios_at(const ProblemParams& base,
                                      std::uint64_t seed, int n_draws, double R,
                                      double r, double h, Shape shape,
                                      const SolverConfig& cfg,
                                      std::vector<double>* lambdas) {
  const TruncatedGrid grid(R, h, shape);
  std::vector<double> ratios;
  for (int t = 0; t < n_draws; ++t) {
    const HarnackDrawExprs d = harnack_draw(seed, t);
    ProblemParams p = base;
    p.f = CoefficientField(d.f, 1.0);
    p.side[0].a = CoefficientField(d.g1, 1.0);
    p.side[1].a = CoefficientField(d.g2, 1.0);
    const EigenResult res = principal_eig(assemble(grid, p), cfg);
    ratios.push_back(harnack_ratio(grid, res.vector, r));
    if (lambdas) lambdas->push_back(res.lambda);
  }
  return ratios;
}

}  // namespace

HarnackReport harnack_study(const ProblemParams& base, std::uint64_t seed,
                            int n_draws, double R, double r, double h,
                            Shape shape, const SolverConfig& cfg,
                            bool with_refinement) {
  if (!(r <= R / 2.0))
    throw AnalysisError("harnack study requires r <= R/2");
  HarnackReport rep;
  rep.r = r;
  rep.R = R;
  rep.h = h;
  rep.n_draws = n_draws;
  rep.ratios = harnack_ratios_at(base, seed, n_draws, R, r, h, shape, cfg,
                                 &rep.lambdas);
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  if (with_refinement) {
    const auto fine = harnack_ratios_at(base, seed, n_draws, R, r, h / 2.0,
                                        shape, cfg, nullptr);
    const double fine_max = *std::max_element(fine.begin(), fine.end());
    rep.refinement_drift = std::fabs(fine_max - rep.max_ratio) / rep.max_ratio;
  }
  return rep;
}

DecayEnvelope decay_envelope(const ProblemParams& params,
                             const std::vector<double>& rho_ladder,
                             const std::vector<double>& beta_ladder,
                             const TruncatedGrid& grid_R,
                             const EigenResult& eig_R,
                             const SolverConfig& cfg) {
  if (!params.driftless())
    throw AnalysisError("decay envelope requires c = c_i = 0");
  DecayEnvelope env;
  const double d1 = params.side[0].d, d2 = params.side[1].d;

  for (double rho : rho_ladder) {
    if (!(rho < grid_R.R()))
      throw AnalysisError("rho ladder must stay below the truncation radius");
    const TruncatedGrid grid_rho(rho, grid_R.h(), grid_R.shape());
    const double lam_rho =
        principal_eig(assemble(grid_rho, params), cfg).lambda;
    std::array<double, 2> outer{};
    for (int i = 0; i < 2; ++i)
      outer[i] = sup_on_region(params.side[i].a, grid_R, Region::Outer, rho);
    for (double beta : beta_ladder) {
      const double g1 = params.mu[0] / (d1 * beta + params.nu[0]);
      const double g2 = params.mu[1] / (d2 * beta + params.nu[1]);
      const double alpha =
          std::sqrt((d1 * g1 + d2 * g2) * beta / (2.0 * params.D));
      const bool field_ok = d1 * (alpha * alpha + beta * beta) <= -outer[0] - lam_rho &&
                            d2 * (alpha * alpha + beta * beta) <= -outer[1] - lam_rho;
      const bool road_beta = beta * (d1 * g1 + d2 * g2) / 2.0 >= lam_rho;
      const bool road_nobeta = (d1 * g1 + d2 * g2) / 2.0 >= lam_rho;
      if (field_ok && road_beta) {
        env.feasible = true;
        env.rho = rho;
        env.beta = beta;
        env.alpha = alpha;
        env.gamma = {g1, g2};
        env.outer_sup = outer;
        env.lambda_rho = lam_rho;
        env.road_check_beta = road_beta;
        env.road_check_nobeta = road_nobeta;
        break;
      }
    }
    if (env.feasible) break;
  }
  if (!env.feasible) return env;

  // prefactor from the sup of the normalized eigenfunction over the core
  double sup_core = 0.0;
  for (int k = 1; k <= 2 * grid_R.n() - 1; ++k)
    if (std::fabs(grid_R.road_x(k)) <= env.rho)
      sup_core = std::max(sup_core, eig_R.vector[grid_R.road_index(k)]);
  for (int side = 0; side < 2; ++side)
    for (int local = 0; local < grid_R.field_count(); ++local) {
      const auto nd = grid_R.field_nodes()[local];
      const double x = grid_R.field_x(nd), y = grid_R.field_y(nd);
      if (x * x + y * y <= env.rho * env.rho)
        sup_core = std::max(sup_core,
                            eig_R.vector[grid_R.field_index(side, local)]);
    }
  env.prefactor = sup_core * std::exp(2.0 * (env.alpha + env.beta) * env.rho);

  // pointwise domination at every unknown node of the R-grid
  env.max_violation = -std::numeric_limits<double>::infinity();
  auto record = [&env](double value, double bound, double x, double y) {
    const double viol = value - bound;
    if (viol > env.max_violation) {
      env.max_violation = viol;
      env.worst_node = {x, y};
    }
    if (viol > 0.0) ++env.violations;
  };
  for (int k = 1; k <= 2 * grid_R.n() - 1; ++k) {
    const double x = grid_R.road_x(k);
    record(eig_R.vector[grid_R.road_index(k)],
           env.prefactor * std::exp(-env.alpha * std::fabs(x)), x, -1.0);
  }
  for (int side = 0; side < 2; ++side)
    for (int local = 0; local < grid_R.field_count(); ++local) {
      const auto nd = grid_R.field_nodes()[local];
      const double x = grid_R.field_x(nd), y = grid_R.field_y(nd);
      record(eig_R.vector[grid_R.field_index(side, local)],
             env.prefactor * env.gamma[side] *
                 std::exp(-env.alpha * std::fabs(x) - env.beta * y),
             x, y);
    }
  return env;
}

}  // namespace roadfield
