#include "roadfield/sampling.hpp"

#include <cmath>
#include <limits>

namespace roadfield {

double sup_on_region(const CoefficientField& field, const TruncatedGrid& grid,
                     Region region, double radius) {
  if (radius < 0.0 || radius > grid.R() * std::sqrt(2.0) + grid.h())
    throw GridError("probe radius out of range for this grid");
  const int n = grid.n();
  const double h = grid.h(), R = grid.R();
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int j = 0; j <= n; ++j) {
    const double y = j * h;
    for (int k = 0; k <= 2 * n; ++k) {
      const double x = -R + k * h;
      const double rr = x * x + y * y;
      // both regions are closed: nodes on the circle belong to each
      const bool keep = region == Region::Inner ? rr <= radius * radius + 1e-12
                                                : rr >= radius * radius - 1e-12;
      if (!keep) continue;
      any = true;
      best = std::max(best, field.value(x, y));
    }
  }
  if (!any) throw GridError("empty probe region");
  return best;
}

double sup_on_grid(const CoefficientField& field, const TruncatedGrid& grid) {
  return sup_on_region(field, grid, Region::Inner,
                       grid.R() * std::sqrt(2.0) + grid.h());
}

}  // namespace roadfield
