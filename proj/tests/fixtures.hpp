#ifndef ROADFIELD_TESTS_FIXTURES_HPP
#define ROADFIELD_TESTS_FIXTURES_HPP

#include <cmath>
#include <cstdio>
#include <string>

#include "roadfield/params.hpp"

namespace roadfield::fixtures {

// all physical constants 1, a1 = a2 = a0
inline ProblemParams unit(double a0 = 0.0) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a0);
  ProblemParams p;
  p.side[0].a = CoefficientField(buf, std::fabs(a0));
  p.side[1].a = p.side[0].a;
  return p;
}

// favorable disk of radius 5 smoothed by a tanh ramp, unfavorable outside
inline ProblemParams niche() {
  ProblemParams p;
  p.side[0].a = CoefficientField("-tanh(2*(sqrt(x^2 + y^2) - 5))", 1.0);
  p.side[1].a = p.side[0].a;
  return p;
}

}  // namespace roadfield::fixtures

#endif
