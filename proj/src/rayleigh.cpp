#include "roadfield/rayleigh.hpp"

#include <cmath>
#include <stdexcept>

namespace roadfield {

DiscreteTriple DiscreteTriple::zeros(const TruncatedGrid& grid) {
  DiscreteTriple t;
  t.u.assign(grid.road_count(), 0.0);
  t.v[0].assign(grid.road_count() + grid.field_count(), 0.0);
  t.v[1] = t.v[0];
  return t;
}

std::vector<double> DiscreteTriple::flatten(const Pencil& layout) const {
  if ((int)u.size() != layout.road_count ||
      (int)v[0].size() != layout.road_count + layout.field_count ||
      (int)v[1].size() != layout.road_count + layout.field_count)
    throw std::invalid_argument("triple does not match pencil layout");
  std::vector<double> x((std::size_t)layout.size());
  for (int k = 0; k < layout.road_count; ++k) x[k] = u[k];
  for (int side = 0; side < 2; ++side) {
    const int base = layout.road_count + side * (layout.road_count + layout.field_count);
    for (int i = 0; i < layout.road_count + layout.field_count; ++i)
      x[base + i] = v[side][i];
  }
  return x;
}

double quotient(const DiscreteTriple& t, const Pencil& pencil) {
  const auto x = t.flatten(pencil);
  const auto Kx = pencil.K.multiply(x);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < pencil.K.n(); ++i) {
    num += x[i] * Kx[i];
    den += x[i] * pencil.mass[i] * x[i];
  }
  if (den == 0.0)
    throw std::invalid_argument("quotient of the identically zero triple");
  return num / den;
}

double quotient(const DiscreteTriple& t, const TruncatedGrid& grid,
                const ProblemParams& params) {
  return quotient(t, assemble_symmetric(grid, params));
}

double quotient_symmetric_case(const std::vector<double>& u,
                               const std::vector<double>& v,
                               const TruncatedGrid& grid,
                               const ProblemParams& params) {
  if (!params.driftless())
    throw std::invalid_argument("quotient requires c = c_i = 0");
  if (params.side[0].d != params.side[1].d || params.mu[0] != params.mu[1] ||
      params.nu[0] != params.nu[1] ||
      !params.side[0].a.expression().structurally_equal(
          params.side[1].a.expression()))
    throw std::invalid_argument("quotient_symmetric_case requires symmetric sides");

  const double h = grid.h();
  const int n = grid.n();
  const int nroad = grid.road_count();
  if ((int)u.size() != nroad || (int)v.size() != nroad + grid.field_count())
    throw std::invalid_argument("size mismatch");
  const double mu = params.mu[0], nu = params.nu[0];
  const double D = params.D, d = params.side[0].d;
  const CoefficientField& a = params.side[0].a;

  auto uval = [&](int k) {
    return (k >= 1 && k <= 2 * n - 1) ? u[k - 1] : 0.0;
  };
  auto tval = [&](int k) {
    return (k >= 1 && k <= 2 * n - 1) ? v[k - 1] : 0.0;
  };
  auto fval = [&](int k, int j) {
    if (j == 0) return tval(k);
    const int lf = grid.field_local(k, j);
    return lf >= 0 ? v[nroad + lf] : 0.0;
  };

  double num = 0.0, den = 0.0;
  // road stiffness and mass, weight mu/2
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double du = uval(k + 1) - uval(k);
    num += 0.5 * mu * D * du * du / h;
  }
  for (int k = 1; k <= 2 * n - 1; ++k) den += 0.5 * mu * h * uval(k) * uval(k);

  // field gradient, potential and mass, weight nu
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const double dt = tval(k + 1) - tval(k);
    num += 0.5 * nu * d * dt * dt;  // trace-row horizontal edges, half cell
  }
  for (int k = 1; k <= 2 * n - 1; ++k) {
    const double dv = fval(k, 1) - tval(k);
    num += nu * d * dv * dv;
  }
  for (int local = 0; local < grid.field_count(); ++local) {
    const auto nd = grid.field_nodes()[local];
    const double vc = fval(nd.k, nd.j);
    const double de = fval(nd.k + 1, nd.j) - vc;
    const double dn = fval(nd.k, nd.j + 1) - vc;
    num += nu * d * (de * de + dn * dn);
    if (grid.field_local(nd.k - 1, nd.j) < 0 && nd.k - 1 >= 0)
      num += nu * d * vc * vc;  // west edge against a Dirichlet endpoint
    if (nd.j >= 2 && grid.field_local(nd.k, nd.j - 1) < 0)
      num += nu * d * vc * vc;
  }
  for (int k = 1; k <= 2 * n - 1; ++k) {
    const double w = 0.5 * h * h;
    const double tv = tval(k);
    num -= nu * a.value(grid.road_x(k), 0.0) * w * tv * tv;
    den += nu * w * tv * tv;
  }
  for (int local = 0; local < grid.field_count(); ++local) {
    const auto nd = grid.field_nodes()[local];
    const double w = h * h;
    const double vc = fval(nd.k, nd.j);
    num -= nu * a.value(grid.field_x(nd), grid.field_y(nd)) * w * vc * vc;
    den += nu * w * vc * vc;
  }

  // exchange penalty, weight 1
  for (int k = 1; k <= 2 * n - 1; ++k) {
    const double e = mu * uval(k) - nu * tval(k);
    num += h * e * e;
  }

  if (den == 0.0)
    throw std::invalid_argument("quotient of the identically zero pair");
  return num / den;
}

}  // namespace roadfield
