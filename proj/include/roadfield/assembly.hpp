#ifndef ROADFIELD_ASSEMBLY_HPP
#define ROADFIELD_ASSEMBLY_HPP

#include <stdexcept>

#include "roadfield/grid.hpp"
#include "roadfield/params.hpp"
#include "roadfield/sparse.hpp"

namespace roadfield {

enum class DriftScheme { Central, Upwind, Auto };

DriftScheme drift_scheme_from_string(const std::string& s);
std::string to_string(DriftScheme s);

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exchange-condition elimination. With the one-sided first-order derivative
// d_y v(x, 0) ~ (v(x, h) - v(x, 0)) / h, the condition B_i(u, v) = 0 solves
// for the trace value as
//   v(x, 0) = T_i = (mu_i u + (d_i / h) v(x, h)) / (nu_i + d_i / h),
// an affine combination with strictly positive coefficients.
struct TraceRule {
  double u_coef;   // mu / (nu + d/h)
  double v_coef;   // (d/h) / (nu + d/h)
};
TraceRule eliminate_trace(const ProblemParams& p, int side, double h);

// The assembled operator of the discrete eigenproblem A x = lambda x, where
// A discretizes (u, v1, v2) -> (-L0(u,v1,v2), -L1 v1, -L2 v2) with the
// exchange conditions eliminated. Unknowns follow the grid's global index.
struct SystemMatrix {
  SparseMatrix A;
  int road_count = 0;
  int field_count = 0;          // per side
  bool peclet_ok = false;       // |c| h / (2 D) <= 1 for road and both sides
  bool zmatrix_ok = false;      // all off-diagonal entries <= 0
  DriftScheme scheme_used = DriftScheme::Central;

  int n() const { return A.n(); }
};

SystemMatrix assemble(const TruncatedGrid& grid, const ProblemParams& params,
                      DriftScheme scheme = DriftScheme::Auto,
                      bool allow_peclet_violation = false);

// Single-field block with Dirichlet conditions on the whole boundary
// including y = 0 (no exchange). Used for the lambda_D(-L_i) comparison.
SparseMatrix assemble_dirichlet_field(const TruncatedGrid& grid,
                                      const ProblemParams& params, int side,
                                      DriftScheme scheme = DriftScheme::Auto,
                                      bool allow_peclet_violation = false);

// Symmetric stiffness/mass pencil (K, B) of the Rayleigh-Ritz quadratic
// form, valid only for c = c_i = 0. Unknowns here include the y = 0 trace
// nodes: per side, the 2n-1 trace values come first, then the interior field
// nodes in grid order. B is diagonal and positive.
struct Pencil {
  SparseMatrix K;
  std::vector<double> mass;     // diagonal of B
  int road_count = 0;
  int field_count = 0;          // interior nodes per side

  int size() const { return road_count + 2 * (road_count + field_count); }
  int road_index(int k) const { return k - 1; }
  int trace_index(int side, int k) const {
    return road_count + side * (road_count + field_count) + (k - 1);
  }
  int field_index(int side, int local) const {
    return road_count + side * (road_count + field_count) + road_count + local;
  }
};

Pencil assemble_symmetric(const TruncatedGrid& grid, const ProblemParams& params);

}  // namespace roadfield

#endif
