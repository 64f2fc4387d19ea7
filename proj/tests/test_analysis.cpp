#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "roadfield/analysis.hpp"
#include "roadfield/assembly.hpp"

using namespace roadfield;

TEST_CASE("dirichlet eigenvalue: closed form on the rectangle") {
  // separable modes: lambda_h = (2d/h^2)(2 - cos(pi h/(2R)) - cos(pi h/R)),
  // exact for the discrete 5-point operator
  const double R = 4.0;
  for (double h : {0.5, 0.25}) {
    const TruncatedGrid g(R, h, Shape::Rectangle);
    const EigenResult eig = dirichlet_eig(g, fixtures::unit(), 0);
    const double closed =
        2.0 / (h * h) *
        (2.0 - std::cos(M_PI * h / (2.0 * R)) - std::cos(M_PI * h / R));
    CHECK(std::fabs(eig.lambda - closed) <= 1e-8 * (1.0 + closed));
    // dense oracle agreement
    const SparseMatrix A = assemble_dirichlet_field(g, fixtures::unit(), 0);
    const EigenResult dn = dense_principal_eig(A);
    CHECK(std::fabs(eig.lambda - dn.lambda) <= 1e-8 * (1.0 + std::fabs(dn.lambda)));
    // continuum value within O(h^2)
    const double continuum = M_PI * M_PI * (1.0 / (4.0 * R * R) + 1.0 / (R * R));
    CHECK(std::fabs(eig.lambda - continuum) <= 2.0 * h * h);
  }
}

TEST_CASE("dirichlet eigenvalue: constant potential shifts exactly") {
  const TruncatedGrid g(4.0, 0.5, Shape::Rectangle);
  const double base = dirichlet_eig(g, fixtures::unit(0.0), 0).lambda;
  const double shifted = dirichlet_eig(g, fixtures::unit(0.7), 0).lambda;
  CHECK(shifted == doctest::Approx(base - 0.7).epsilon(1e-12));
}

TEST_CASE("dirichlet eigenvalue with drift tends to c^2/(4d)") {
  // generalized principal eigenvalue of the drift Laplacian; at finite R the
  // Dirichlet value lies above and decreases toward c1^2/(4 d1)
  ProblemParams p = fixtures::unit();
  p.side[0].c = 1.0;
  double prev = 1e300;
  for (double R : {4.0, 8.0, 16.0}) {
    const TruncatedGrid g(R, 0.25, Shape::Rectangle);
    const double lam = dirichlet_eig(g, p, 0).lambda;
    CHECK(lam >= 0.25 - 1e-8);  // c^2/(4d) = 0.25
    CHECK(lam < prev);
    prev = lam;
  }
  CHECK(prev <= 0.25 + 0.2);
}

TEST_CASE("bounds report on the zero-potential fixture") {
  const TruncatedGrid g(8.0, 0.25, Shape::Halfdisk);
  const BoundsReport rep = bounds_check(g, fixtures::unit());
  CHECK(rep.lower == 0.0);
  CHECK(rep.upper_road == doctest::Approx(2.0));
  CHECK(rep.lower_ok);
  CHECK(rep.lambda > 0.0);
  CHECK(rep.lambda <= rep.upper_road);
  CHECK(rep.upper_dirichlet[0] > 0.0);
}

TEST_CASE("bounds report under the constant potential") {
  const TruncatedGrid g(8.0, 0.25, Shape::Halfdisk);
  const BoundsReport rep = bounds_check(g, fixtures::unit(0.5));
  CHECK(rep.lower == doctest::Approx(-0.5));
  CHECK(rep.lower_ok);
  CHECK(rep.lambda > -0.5);
  CHECK(rep.lambda < 0.0);
}

TEST_CASE("converge_in_R: monotone decrease and tail fit") {
  const ConvergenceReport rep = converge_in_R(
      fixtures::unit(0.5), {4.0, 6.0, 8.0, 12.0, 16.0}, 0.25, Shape::Halfdisk);
  CHECK(rep.monotone_violation == 0.0);
  for (std::size_t i = 1; i < rep.lambdas.size(); ++i)
    CHECK(rep.lambdas[i] < rep.lambdas[i - 1]);
  REQUIRE(rep.extrapolated_limit.has_value());
  // squeeze limit is -0.5; the tail fit should land nearby
  CHECK(std::fabs(*rep.extrapolated_limit + 0.5) < 0.05);
  REQUIRE(rep.fit_exponent.has_value());
  CHECK(*rep.fit_exponent > 0.5);

  // single radius: trivial report
  const ConvergenceReport one =
      converge_in_R(fixtures::unit(), {4.0}, 0.5, Shape::Halfdisk);
  CHECK(one.monotone_violation == 0.0);
  CHECK_FALSE(one.extrapolated_limit.has_value());

  CHECK_THROWS(converge_in_R(fixtures::unit(), {4.0, 3.0}, 0.5, Shape::Halfdisk));
}

TEST_CASE("niche eigenvalue stabilizes once R clears the niche") {
  const ConvergenceReport rep =
      converge_in_R(fixtures::niche(), {5.0, 10.0, 20.0}, 0.25, Shape::Halfdisk);
  for (std::size_t i = 1; i < rep.lambdas.size(); ++i)
    CHECK(rep.lambdas[i] <= rep.lambdas[i - 1] + 1e-12);
  CHECK(std::fabs(rep.lambdas[2] - rep.lambdas[1]) < 1e-3);
  CHECK(rep.lambdas.back() < -0.5);  // strongly favorable niche
}

TEST_CASE("sweeps: monotone exactly on the driftless guaranteed paths") {
  const TruncatedGrid g(6.0, 0.25, Shape::Halfdisk);
  const ProblemParams base = fixtures::niche();

  const SweepReport sd = sweep(base, "D", {0.5, 1.0, 2.0, 4.0}, g);
  REQUIRE(sd.monotone_ok.has_value());
  CHECK(*sd.monotone_ok);
  for (std::size_t i = 1; i < sd.lambdas.size(); ++i)
    CHECK(sd.lambdas[i] >= sd.lambdas[i - 1] - 1e-8);

  const SweepReport sa = sweep(base, "a_shift1", {0.0, 0.1, 0.2}, g);
  REQUIRE(sa.monotone_ok.has_value());
  CHECK(*sa.monotone_ok);
  for (std::size_t i = 1; i < sa.lambdas.size(); ++i)
    CHECK(sa.lambdas[i] <= sa.lambdas[i - 1] + 1e-8);

  // with drift the sweep only reports
  ProblemParams drifted = base;
  drifted.c = 0.5;
  const SweepReport sc = sweep(drifted, "D", {1.0, 2.0}, g);
  CHECK_FALSE(sc.monotone_ok.has_value());

  // difference quotients are finite and positive for a genuine ladder
  CHECK(sd.max_difference_quotient > 0.0);
  CHECK(std::isfinite(sd.max_difference_quotient));

  CHECK_THROWS(sweep(base, "nonsense", {1.0}, g));
}

TEST_CASE("condition strict: constant potential fails, niche passes") {
  // a = 0.5 everywhere: outer sup = 0.5 equals -lambda_1 in the limit, so
  // the strict inequality fails
  {
    const TruncatedGrid g(8.0, 0.25, Shape::Halfdisk);
    const ConditionStrictReport rep =
        check_condition_strict(fixtures::unit(0.5), g, -0.49);
    CHECK_FALSE(rep.ok);
  }
  // the niche: outer sup = -1 < -lambda_1 with lambda_1 < 0
  {
    const TruncatedGrid g(16.0, 0.25, Shape::Halfdisk);
    const ConditionStrictReport rep =
        check_condition_strict(fixtures::niche(), g, -0.7);
    CHECK(rep.ok);
    CHECK(rep.outer_sup[0] < -0.9);
  }
  // positive lambda estimate fails regardless of a
  {
    const TruncatedGrid g(16.0, 0.25, Shape::Halfdisk);
    const ConditionStrictReport rep =
        check_condition_strict(fixtures::niche(), g, 0.1);
    CHECK_FALSE(rep.ok);
  }
}

TEST_CASE("strict monotonicity probe on the niche") {
  const TruncatedGrid g(10.0, 0.25, Shape::Halfdisk);
  const CoefficientField bump("0.25*(1 - tanh(4*(sqrt(x^2 + y^2) - 1)))", 0.5);
  const StrictProbeResult rep =
      strict_monotonicity_probe(fixtures::niche(), bump, g, true);
  CHECK(rep.margin > 1e-8);
  CHECK(rep.lambda_bumped < rep.lambda_base);

  // a zero bump changes nothing
  const CoefficientField zero("0", 0.0);
  const StrictProbeResult none =
      strict_monotonicity_probe(fixtures::niche(), zero, g, true);
  CHECK(none.margin == doctest::Approx(0.0).epsilon(1e-12));

  // mass-weighted sensitivity: a bump near the origin bites harder than the
  // same bump far out near the truncation rim
  const CoefficientField far(
      "0.25*(1 - tanh(4*(sqrt((x - 9)^2 + y^2) - 1)))", 0.5);
  const StrictProbeResult rim =
      strict_monotonicity_probe(fixtures::niche(), far, g, true);
  CHECK(rep.margin > rim.margin);
  CHECK(rim.margin >= -1e-12);
}

TEST_CASE("harnack draws are reproducible and bounded") {
  const HarnackDrawExprs a = harnack_draw(42, 3);
  const HarnackDrawExprs b = harnack_draw(42, 3);
  CHECK(a.f == b.f);
  CHECK(a.g1 == b.g1);
  CHECK(a.g2 == b.g2);
  const HarnackDrawExprs c = harnack_draw(42, 4);
  CHECK(a.g1 != c.g1);

  // declared bound 1 must hold on a probe grid
  const TruncatedGrid g(10.0, 0.5, Shape::Halfdisk);
  const CoefficientField g1(a.g1, 1.0);
  const CoefficientField f(a.f, 1.0);
  for (int j = 0; j <= g.n(); ++j)
    for (int k = 0; k <= 2 * g.n(); ++k) {
      const double x = -g.R() + k * g.h(), y = j * g.h();
      CHECK(std::fabs(g1.value(x, y)) <= 1.0);
      if (j == 0) CHECK(std::fabs(f.value(x, 0.0)) <= 1.0);
    }
}

TEST_CASE("harnack ratio of a constant-coefficient eigenfunction") {
  const TruncatedGrid g(8.0, 0.25, Shape::Halfdisk);
  const EigenResult eig = principal_eig(assemble(g, fixtures::unit()));
  const double ratio = harnack_ratio(g, eig.vector, 2.0);
  CHECK(ratio >= 1.0);
  CHECK(std::isfinite(ratio));
}

TEST_CASE("harnack study smoke run") {
  // small domain keeps this fast; the acceptance suite runs the full study
  const HarnackReport rep = harnack_study(fixtures::unit(), 7, 3, 8.0, 2.0,
                                          0.5, Shape::Halfdisk, {}, true);
  CHECK(rep.n_draws == 3);
  for (double ratio : rep.ratios) {
    CHECK(ratio >= 1.0);
    CHECK(std::isfinite(ratio));
  }
  REQUIRE(rep.refinement_drift.has_value());
  CHECK(*rep.refinement_drift < 0.5);
  CHECK_THROWS(harnack_study(fixtures::unit(), 7, 1, 8.0, 5.0, 0.5,
                             Shape::Halfdisk, {}, false));  // r > R/2
}

TEST_CASE("decay envelope formulas and feasibility") {
  const ProblemParams p = fixtures::niche();
  const TruncatedGrid g(16.0, 0.25, Shape::Halfdisk);
  const SystemMatrix sys = assemble(g, p);
  const EigenResult eig = principal_eig(sys);
  const DecayEnvelope env = decay_envelope(
      p, {4.0, 8.0}, {1.0, 0.5, 0.25, 0.125}, g, eig);
  REQUIRE(env.feasible);
  // stored fields reproduce the defining formulas to machine precision
  for (int i = 0; i < 2; ++i) {
    const double gi = p.mu[i] / (p.side[i].d * env.beta + p.nu[i]);
    CHECK(env.gamma[i] == doctest::Approx(gi).epsilon(1e-15));
  }
  const double alpha = std::sqrt((p.side[0].d * env.gamma[0] +
                                  p.side[1].d * env.gamma[1]) *
                                 env.beta / (2.0 * p.D));
  CHECK(env.alpha == doctest::Approx(alpha).epsilon(1e-15));
  CHECK(env.road_check_beta);
  // pointwise domination holds on this fixture
  CHECK(env.violations == 0);
  CHECK(env.max_violation <= 0.0);
  CHECK(env.prefactor >= 1.0);

  // beta -> 0 end of the ladder: alpha -> 0 and the envelope degenerates to
  // the constant prefactor, which dominates a sup-normalized function
  const DecayEnvelope flat = decay_envelope(p, {8.0}, {1.0 / 1024.0}, g, eig);
  REQUIRE(flat.feasible);
  CHECK(flat.alpha < 0.05);
  CHECK(flat.violations == 0);
}

TEST_CASE("decay envelope reports infeasible ladders") {
  const ProblemParams p = fixtures::niche();
  const TruncatedGrid g(8.0, 0.5, Shape::Halfdisk);
  const EigenResult eig = principal_eig(assemble(g, p));
  // beta = 50 forces d (alpha^2 + beta^2) far above any admissible slack
  const DecayEnvelope env = decay_envelope(p, {4.0}, {50.0}, g, eig);
  CHECK_FALSE(env.feasible);
}
