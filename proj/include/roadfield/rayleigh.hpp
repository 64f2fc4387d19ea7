#ifndef ROADFIELD_RAYLEIGH_HPP
#define ROADFIELD_RAYLEIGH_HPP

#include <array>
#include <vector>

#include "roadfield/assembly.hpp"
#include "roadfield/grid.hpp"
#include "roadfield/params.hpp"

namespace roadfield {

// Admissible discrete triple (u, v1, v2). Field values include the y = 0
// trace row: per side, the 2n-1 trace values come first, then the interior
// nodes in grid order (matching the Pencil layout). Dirichlet boundary
// values are implicitly zero.
struct DiscreteTriple {
  std::vector<double> u;
  std::array<std::vector<double>, 2> v;

  static DiscreteTriple zeros(const TruncatedGrid& grid);
  std::vector<double> flatten(const Pencil& layout) const;
};

// Rayleigh-Ritz quotient (t K t) / (t B t). The quotient and the pencil
// share one quadrature definition by construction.
double quotient(const DiscreteTriple& t, const Pencil& pencil);
double quotient(const DiscreteTriple& t, const TruncatedGrid& grid,
                const ProblemParams& params);

// Reduced two-component quotient for the symmetric case d1 = d2, mu1 = mu2,
// nu1 = nu2, a1 = a2 (and c = c_i = 0). Evaluated by direct summation with
// the road terms weighted mu/2, which makes it coincide exactly with the
// full quotient of the doubled triple (u, v, v).
double quotient_symmetric_case(const std::vector<double>& u,
                               const std::vector<double>& v,
                               const TruncatedGrid& grid,
                               const ProblemParams& params);

}  // namespace roadfield

#endif
