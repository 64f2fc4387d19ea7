#ifndef ROADFIELD_SAMPLING_HPP
#define ROADFIELD_SAMPLING_HPP

#include "roadfield/expr.hpp"
#include "roadfield/grid.hpp"

namespace roadfield {

enum class Region { Inner, Outer };

// Maximum of a coefficient field over the grid's lattice nodes (including
// trace and Dirichlet nodes) lying inside, respectively outside, the
// half-disk of the given radius. A grid-sampled approximation of the true
// supremum. Throws when the region contains no lattice node.
double sup_on_region(const CoefficientField& field, const TruncatedGrid& grid,
                     Region region, double radius);

// Supremum over the whole probe lattice of the grid.
double sup_on_grid(const CoefficientField& field, const TruncatedGrid& grid);

}  // namespace roadfield

#endif
