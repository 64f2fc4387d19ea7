#include "roadfield/assembly.hpp"

#include <cmath>

namespace roadfield {

DriftScheme drift_scheme_from_string(const std::string& s) {
  if (s == "central") return DriftScheme::Central;
  if (s == "upwind") return DriftScheme::Upwind;
  if (s == "auto") return DriftScheme::Auto;
  throw AssemblyError("unknown drift scheme '" + s + "'");
}

std::string to_string(DriftScheme s) {
  switch (s) {
    case DriftScheme::Central: return "central";
    case DriftScheme::Upwind: return "upwind";
    default: return "auto";
  }
}

TraceRule eliminate_trace(const ProblemParams& p, int side, double h) {
  const double den = p.nu[side] + p.side[side].d / h;
  return {p.mu[side] / den, (p.side[side].d / h) / den};
}

namespace {

struct Drift {
  double diag, east, west;
};

// One-dimensional drift stencil for the term -c dw/dx. Central uses
// (w_E - w_W) / 2h; upwind differences one-sided against the drift sign so
// the off-diagonal contributions stay nonpositive.
Drift drift_stencil(double c, double h, bool central) {
  if (c == 0.0) return {0.0, 0.0, 0.0};
  if (central) return {0.0, -c / (2.0 * h), c / (2.0 * h)};
  if (c > 0.0) return {c / h, -c / h, 0.0};
  return {-c / h, 0.0, c / h};
}

bool peclet_condition(const ProblemParams& p, double h) {
  if (std::fabs(p.c) * h / (2.0 * p.D) > 1.0 + 1e-12) return false;
  for (int i = 0; i < 2; ++i)
    if (std::fabs(p.side[i].c) * h / (2.0 * p.side[i].d) > 1.0 + 1e-12)
      return false;
  return true;
}

bool resolve_central(DriftScheme scheme, bool peclet_ok, bool allow_violation) {
  switch (scheme) {
    case DriftScheme::Central:
      if (!peclet_ok && !allow_violation)
        throw AssemblyError(
            "central drift scheme with violated grid Peclet condition breaks "
            "the Z-matrix structure; refine h, use upwind, or set "
            "solver.allow_peclet_violation");
      return true;
    case DriftScheme::Upwind:
      return false;
    default:
      return peclet_ok;
  }
}

}  // namespace

SystemMatrix assemble(const TruncatedGrid& grid, const ProblemParams& params,
                      DriftScheme scheme, bool allow_peclet_violation) {
  params.validate();
  const double h = grid.h();
  const double h2 = h * h;
  const bool peclet_ok = peclet_condition(params, h);
  const bool central = resolve_central(scheme, peclet_ok, allow_peclet_violation);

  SystemMatrix out;
  out.road_count = grid.road_count();
  out.field_count = grid.field_count();
  out.peclet_ok = peclet_ok;
  out.scheme_used = central ? DriftScheme::Central : DriftScheme::Upwind;

  SparseMatrix::Builder b(grid.size());
  const int n = grid.n();
  const TraceRule tr[2] = {eliminate_trace(params, 0, h),
                           eliminate_trace(params, 1, h)};

  // road rows: -D u'' - c u' - f u + (mu1 + mu2) u - sum_i nu_i T_i = lambda u
  const Drift road_drift = drift_stencil(params.c, h, central);
  for (int k = 1; k <= 2 * n - 1; ++k) {
    const int r = grid.road_index(k);
    const double x = grid.road_x(k);
    double diag = 2.0 * params.D / h2 + params.mu[0] + params.mu[1] +
                  road_drift.diag - params.road_potential(x);
    for (int i = 0; i < 2; ++i) {
      diag -= params.nu[i] * tr[i].u_coef;
      const int lf = grid.field_local(k, 1);
      b.add(r, grid.field_index(i, lf), -params.nu[i] * tr[i].v_coef);
    }
    if (k + 1 <= 2 * n - 1)
      b.add(r, grid.road_index(k + 1), -params.D / h2 + road_drift.east);
    if (k - 1 >= 1)
      b.add(r, grid.road_index(k - 1), -params.D / h2 + road_drift.west);
    b.add(r, r, diag);
  }

  // field rows: -d_i (5-point Laplacian) - c_i d/dx - a_i v = lambda v, with
  // the y = 0 neighbor replaced by T_i and Dirichlet neighbors dropped
  for (int side = 0; side < 2; ++side) {
    const SideParams& sp = params.side[side];
    const Drift fd = drift_stencil(sp.c, h, central);
    for (int local = 0; local < grid.field_count(); ++local) {
      const auto nd = grid.field_nodes()[local];
      const int r = grid.field_index(side, local);
      const double x = grid.field_x(nd), y = grid.field_y(nd);
      double diag = 4.0 * sp.d / h2 + fd.diag - sp.a.value(x, y);
      const int east = grid.field_local(nd.k + 1, nd.j);
      const int west = grid.field_local(nd.k - 1, nd.j);
      const int north = grid.field_local(nd.k, nd.j + 1);
      if (east >= 0) b.add(r, grid.field_index(side, east), -sp.d / h2 + fd.east);
      if (west >= 0) b.add(r, grid.field_index(side, west), -sp.d / h2 + fd.west);
      if (north >= 0) b.add(r, grid.field_index(side, north), -sp.d / h2);
      if (nd.j == 1) {
        // south neighbor is the eliminated trace value T_i(x_k)
        b.add(r, grid.road_index(nd.k), -(sp.d / h2) * tr[side].u_coef);
        diag += -(sp.d / h2) * tr[side].v_coef;
      } else {
        const int south = grid.field_local(nd.k, nd.j - 1);
        if (south >= 0) b.add(r, grid.field_index(side, south), -sp.d / h2);
      }
      b.add(r, r, diag);
    }
  }

  out.A = b.build();
  out.zmatrix_ok = out.A.is_z_matrix();
  return out;
}

SparseMatrix assemble_dirichlet_field(const TruncatedGrid& grid,
                                      const ProblemParams& params, int side,
                                      DriftScheme scheme,
                                      bool allow_peclet_violation) {
  const SideParams& sp = params.side[side];
  const double h = grid.h(), h2 = h * h;
  const bool peclet_ok = std::fabs(sp.c) * h / (2.0 * sp.d) <= 1.0 + 1e-12;
  const bool central = resolve_central(scheme, peclet_ok, allow_peclet_violation);
  const Drift fd = drift_stencil(sp.c, h, central);

  SparseMatrix::Builder b(grid.field_count());
  for (int local = 0; local < grid.field_count(); ++local) {
    const auto nd = grid.field_nodes()[local];
    const double x = grid.field_x(nd), y = grid.field_y(nd);
    double diag = 4.0 * sp.d / h2 + fd.diag - sp.a.value(x, y);
    const int east = grid.field_local(nd.k + 1, nd.j);
    const int west = grid.field_local(nd.k - 1, nd.j);
    const int north = grid.field_local(nd.k, nd.j + 1);
    const int south = nd.j >= 2 ? grid.field_local(nd.k, nd.j - 1) : -1;
    if (east >= 0) b.add(local, east, -sp.d / h2 + fd.east);
    if (west >= 0) b.add(local, west, -sp.d / h2 + fd.west);
    if (north >= 0) b.add(local, north, -sp.d / h2);
    if (south >= 0) b.add(local, south, -sp.d / h2);
    b.add(local, local, diag);
  }
  return b.build();
}

Pencil assemble_symmetric(const TruncatedGrid& grid, const ProblemParams& params) {
  params.validate();
  if (!params.driftless())
    throw AssemblyError("the symmetric pencil requires c = c_i = 0");

  const double h = grid.h();
  const int n = grid.n();
  Pencil pc;
  pc.road_count = grid.road_count();
  pc.field_count = grid.field_count();
  const int N = pc.size();
  SparseMatrix::Builder b(N);
  pc.mass.assign(N, 0.0);

  // quadratic-form edge: w * (value(i1) - value(i2))^2, index -1 meaning a
  // Dirichlet endpoint with value 0
  auto add_edge = [&b](double w, int i1, int i2) {
    if (i1 < 0 && i2 < 0) return;
    if (i2 < 0) {
      b.add(i1, i1, w);
    } else if (i1 < 0) {
      b.add(i2, i2, w);
    } else {
      b.add(i1, i1, w);
      b.add(i2, i2, w);
      b.add(i1, i2, -w);
      b.add(i2, i1, -w);
    }
  };

  // road: D * integral of |u'|^2 by first differences, Dirichlet at +-R
  for (int k = 0; k <= 2 * n - 1; ++k) {
    const int i1 = (k >= 1 && k <= 2 * n - 1) ? pc.road_index(k) : -1;
    const int i2 = (k + 1 >= 1 && k + 1 <= 2 * n - 1) ? pc.road_index(k + 1) : -1;
    add_edge(params.D / h, i1, i2);
  }
  for (int k = 1; k <= 2 * n - 1; ++k) pc.mass[pc.road_index(k)] += h;

  for (int side = 0; side < 2; ++side) {
    const double beta = params.nu[side] / params.mu[side];
    const double d = params.side[side].d;
    const CoefficientField& a = params.side[side].a;

    // trace-row horizontal edges carry the half cell [0, h/2]
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const int i1 = (k >= 1 && k <= 2 * n - 1) ? pc.trace_index(side, k) : -1;
      const int i2 =
          (k + 1 >= 1 && k + 1 <= 2 * n - 1) ? pc.trace_index(side, k + 1) : -1;
      add_edge(0.5 * beta * d, i1, i2);
    }
    // vertical edges from the trace row into the first interior row
    for (int k = 1; k <= 2 * n - 1; ++k) {
      const int lf = grid.field_local(k, 1);
      add_edge(beta * d, pc.trace_index(side, k),
               lf >= 0 ? pc.field_index(side, lf) : -1);
    }
    // interior edges: each node owns its east and north edge; west/south
    // edges are added only against Dirichlet endpoints so no edge is counted
    // twice
    for (int local = 0; local < grid.field_count(); ++local) {
      const auto nd = grid.field_nodes()[local];
      const int i1 = pc.field_index(side, local);
      const int e = grid.field_local(nd.k + 1, nd.j);
      const int nn = grid.field_local(nd.k, nd.j + 1);
      add_edge(beta * d, i1, e >= 0 ? pc.field_index(side, e) : -1);
      add_edge(beta * d, i1, nn >= 0 ? pc.field_index(side, nn) : -1);
      if (grid.field_local(nd.k - 1, nd.j) < 0) add_edge(beta * d, i1, -1);
      if (nd.j >= 2 && grid.field_local(nd.k, nd.j - 1) < 0)
        add_edge(beta * d, i1, -1);
    }

    // potential and mass, trapezoid weights halved on the trace row
    for (int k = 1; k <= 2 * n - 1; ++k) {
      const int it = pc.trace_index(side, k);
      const double w = 0.5 * h * h;
      b.add(it, it, -beta * a.value(grid.road_x(k), 0.0) * w);
      pc.mass[it] += beta * w;
    }
    for (int local = 0; local < grid.field_count(); ++local) {
      const auto nd = grid.field_nodes()[local];
      const int i1 = pc.field_index(side, local);
      const double w = h * h;
      b.add(i1, i1, -beta * a.value(grid.field_x(nd), grid.field_y(nd)) * w);
      pc.mass[i1] += beta * w;
    }

    // exchange term (1/mu) * h * (mu u_k - nu t_k)^2 over road nodes
    const double mu = params.mu[side], nu = params.nu[side];
    for (int k = 1; k <= 2 * n - 1; ++k) {
      const int iu = pc.road_index(k), it = pc.trace_index(side, k);
      b.add(iu, iu, h * mu);
      b.add(it, it, h * nu * nu / mu);
      b.add(iu, it, -h * nu);
      b.add(it, iu, -h * nu);
    }
  }

  pc.K = b.build();
  return pc;
}

}  // namespace roadfield
