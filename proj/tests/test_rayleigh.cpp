#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "roadfield/eigsolve.hpp"
#include "roadfield/rayleigh.hpp"

using namespace roadfield;

namespace {

DiscreteTriple random_triple(const TruncatedGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DiscreteTriple t = DiscreteTriple::zeros(g);
  for (double& v : t.u) v = u(rng);
  for (int side = 0; side < 2; ++side)
    for (double& v : t.v[side]) v = u(rng);
  return t;
}

DiscreteTriple from_pencil_vector(const TruncatedGrid& g, const Pencil& pc,
                                  const std::vector<double>& x) {
  DiscreteTriple t = DiscreteTriple::zeros(g);
  for (int k = 1; k <= 2 * g.n() - 1; ++k) t.u[k - 1] = x[pc.road_index(k)];
  for (int side = 0; side < 2; ++side) {
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      t.v[side][k - 1] = x[pc.trace_index(side, k)];
    for (int local = 0; local < g.field_count(); ++local)
      t.v[side][pc.road_count + local] = x[pc.field_index(side, local)];
  }
  return t;
}

}  // namespace

TEST_CASE("minimizer's quotient equals the pencil eigenvalue") {
  ProblemParams p = fixtures::unit(0.4);
  p.mu = {1.2, 0.7};
  p.nu = {0.9, 1.4};
  p.side[0].d = 1.5;
  const TruncatedGrid g(3.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  const EigenResult eig = symmetric_principal_eig(pc);
  const DiscreteTriple t = from_pencil_vector(g, pc, eig.vector);
  CHECK(std::fabs(quotient(t, pc) - eig.lambda) <= 1e-12 * (1.0 + std::fabs(eig.lambda)));
}

TEST_CASE("no random admissible triple beats the minimum") {
  const ProblemParams p = fixtures::unit(0.3);
  const TruncatedGrid g(2.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  const double lam = symmetric_principal_eig(pc).lambda;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscreteTriple t = random_triple(g, rng);
    CHECK(quotient(t, pc) >= lam - 1e-10);
  }
}

TEST_CASE("scale invariance of the quotient") {
  const ProblemParams p = fixtures::unit(0.1);
  const TruncatedGrid g(2.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  std::mt19937_64 rng(9);
  const DiscreteTriple t = random_triple(g, rng);
  const double q = quotient(t, pc);
  for (double alpha : {2.0, -3.5, 1e-6, 137.0}) {
    DiscreteTriple ts = t;
    for (double& v : ts.u) v *= alpha;
    for (int side = 0; side < 2; ++side)
      for (double& v : ts.v[side]) v *= alpha;
    CHECK(quotient(ts, pc) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("vanishing exchange term at the balanced trace") {
  // mu u = nu v at every road node kills the exchange penalty: the quotient
  // must then be insensitive to the penalty weight
  ProblemParams p = fixtures::unit();
  p.mu = {2.0, 0.5};
  p.nu = {0.8, 1.6};
  const TruncatedGrid g(2.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  std::mt19937_64 rng(31);
  DiscreteTriple t = random_triple(g, rng);
  for (int side = 0; side < 2; ++side)
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      t.v[side][k - 1] = p.mu[side] / p.nu[side] * t.u[k - 1];

  // exchange contribution = sum_side (1/mu) h (mu u - nu t)^2 = 0; verify by
  // recomputing the numerator via a mu-perturbed pencil: scaling mu and nu
  // together rescales the field blocks but keeps the exchange at zero, so
  // the balanced triple's numerator splits cleanly. Directly: the quotient
  // equals the one with the exchange rows removed.
  Pencil stripped = pc;
  {
    SparseMatrix::Builder b(pc.size());
    const auto row = pc.K.row_offsets();
    const auto col = pc.K.col_indices();
    const auto val = pc.K.values();
    for (int r = 0; r < pc.K.n(); ++r)
      for (int q = row[r]; q < row[r + 1]; ++q) b.add(r, col[q], val[q]);
    // subtract the exchange quadratic form
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      for (int side = 0; side < 2; ++side) {
        const double h = g.h();
        const int iu = pc.road_index(k), it = pc.trace_index(side, k);
        b.add(iu, iu, -h * p.mu[side]);
        b.add(it, it, -h * p.nu[side] * p.nu[side] / p.mu[side]);
        b.add(iu, it, h * p.nu[side]);
        b.add(it, iu, h * p.nu[side]);
      }
    stripped.K = b.build();
  }
  CHECK(quotient(t, pc) == doctest::Approx(quotient(t, stripped)).epsilon(1e-12));
}

TEST_CASE("tent triple dominates the pencil minimum") {
  const ProblemParams p = fixtures::unit();
  const TruncatedGrid g(4.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  DiscreteTriple t = DiscreteTriple::zeros(g);
  const double R = g.R();
  for (int k = 1; k <= 2 * g.n() - 1; ++k)
    t.u[k - 1] = 1.0 - std::fabs(g.road_x(k)) / R;
  for (int side = 0; side < 2; ++side) {
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      t.v[side][k - 1] = p.mu[side] / p.nu[side] * t.u[k - 1];
    for (int local = 0; local < g.field_count(); ++local) {
      const auto nd = g.field_nodes()[local];
      const double ux = 1.0 - std::fabs(g.field_x(nd)) / R;
      t.v[side][pc.road_count + local] =
          p.mu[side] / p.nu[side] * ux * (1.0 - g.field_y(nd) / R);
    }
  }
  const double q = quotient(t, pc);
  CHECK(q > 0.0);
  CHECK(q >= symmetric_principal_eig(pc).lambda - 1e-10);
}

TEST_CASE("exact sensitivity of the quotient to a potential shift") {
  // raising a_1 by delta on a node set S lowers the quotient by exactly
  // (nu1/mu1) * delta * (weighted mass of t on S) / denominator
  const TruncatedGrid g(2.0, 0.5, Shape::Halfdisk);
  ProblemParams base = fixtures::unit(0.2);
  base.mu = {1.3, 1.0};
  base.nu = {0.6, 1.0};
  // S = the disk r <= 1, realized with an indicator-free expression bump:
  // delta * (shifted niche); here use the smooth window w(x,y)
  const char* wexpr = "0.5 - 0.5*tanh(8*(sqrt(x^2 + y^2) - 1))";
  const double delta = 0.37;
  ProblemParams bumped = base;
  {
    Expression sum = Expression::make_binary(
        '+', base.side[0].a.expression(),
        Expression::make_binary('*', Expression::make_number(delta),
                                parse_expression(wexpr)));
    bumped.side[0].a = CoefficientField(std::move(sum), 2.0);
  }
  const Pencil pa = assemble_symmetric(g, base);
  const Pencil pb = assemble_symmetric(g, bumped);
  std::mt19937_64 rng(77);
  const CoefficientField w(wexpr, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const DiscreteTriple t = random_triple(g, rng);
    const double qa = quotient(t, pa);
    const double qb = quotient(t, pb);
    // predicted drop: (nu1/mu1) delta sum_nodes w(node) quadweight t^2 / den
    double mass = 0.0, den = 0.0;
    const double h = g.h();
    for (int k = 1; k <= 2 * g.n() - 1; ++k) {
      const double tv = t.v[0][k - 1];
      mass += w.value(g.road_x(k), 0.0) * 0.5 * h * h * tv * tv;
    }
    for (int local = 0; local < g.field_count(); ++local) {
      const auto nd = g.field_nodes()[local];
      const double tv = t.v[0][pa.road_count + local];
      mass += w.value(g.field_x(nd), g.field_y(nd)) * h * h * tv * tv;
    }
    const auto x = t.flatten(pa);
    for (int i = 0; i < pa.size(); ++i) den += x[i] * pa.mass[i] * x[i];
    const double predicted = base.nu[0] / base.mu[0] * delta * mass / den;
    CHECK(qa - qb == doctest::Approx(predicted).epsilon(1e-10));
  }
}

TEST_CASE("symmetric-case reduction equals the doubled quotient") {
  ProblemParams p = fixtures::unit();
  p.mu = {1.7, 1.7};
  p.nu = {0.8, 0.8};
  p.side[0].d = 1.3;
  p.side[1].d = 1.3;
  p.side[0].a = CoefficientField("0.3*cos(x) - 0.1*y", 5.0);
  p.side[1].a = p.side[0].a;
  const TruncatedGrid g(3.0, 0.5, Shape::Halfdisk);
  const Pencil pc = assemble_symmetric(g, p);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> uu(g.road_count());
    std::vector<double> vv(g.road_count() + g.field_count());
    for (double& x : uu) x = u(rng);
    for (double& x : vv) x = u(rng);
    DiscreteTriple t;
    t.u = uu;
    t.v[0] = vv;
    t.v[1] = vv;
    const double reduced = quotient_symmetric_case(uu, vv, g, p);
    const double doubled = quotient(t, pc);
    CHECK(reduced == doctest::Approx(doubled).epsilon(1e-12));
  }

  // u = 0 with a single interior bump stays finite and positive
  {
    std::vector<double> uu(g.road_count(), 0.0);
    std::vector<double> vv(g.road_count() + g.field_count(), 0.0);
    vv[g.road_count() + g.field_count() / 2] = 1.0;
    const double q = quotient_symmetric_case(uu, vv, g, p);
    CHECK(std::isfinite(q));
    CHECK(q > 0.0);
  }

  // constant-in-y profile v = (mu/nu) u with the Dirichlet taper
  {
    std::vector<double> uu(g.road_count());
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      uu[k - 1] = 1.0 - std::fabs(g.road_x(k)) / g.R();
    std::vector<double> vv(g.road_count() + g.field_count());
    for (int k = 1; k <= 2 * g.n() - 1; ++k)
      vv[k - 1] = p.mu[0] / p.nu[0] * uu[k - 1];
    for (int local = 0; local < g.field_count(); ++local) {
      const auto nd = g.field_nodes()[local];
      vv[g.road_count() + local] =
          p.mu[0] / p.nu[0] * (1.0 - std::fabs(g.field_x(nd)) / g.R());
    }
    const double q = quotient_symmetric_case(uu, vv, g, p);
    CHECK(std::isfinite(q));
    CHECK(q > 0.0);
  }

  ProblemParams asym = p;
  asym.mu = {1.0, 2.0};
  std::vector<double> uu(g.road_count(), 1.0);
  std::vector<double> vv(g.road_count() + g.field_count(), 1.0);
  CHECK_THROWS(quotient_symmetric_case(uu, vv, g, asym));
}

TEST_CASE("zero triple is rejected") {
  const TruncatedGrid g(1.0, 0.5, Shape::Rectangle);
  const Pencil pc = assemble_symmetric(g, fixtures::unit());
  CHECK_THROWS(quotient(DiscreteTriple::zeros(g), pc));
}
