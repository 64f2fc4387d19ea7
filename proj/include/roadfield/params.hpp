#ifndef ROADFIELD_PARAMS_HPP
#define ROADFIELD_PARAMS_HPP

#include <array>
#include <optional>
#include <stdexcept>

#include "roadfield/expr.hpp"

namespace roadfield {

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SideParams {
  double d = 1.0;                       // field diffusivity, > 0
  double c = 0.0;                       // field drift along the road
  CoefficientField a{"0", 0.0};         // growth coefficient a_i(x, y)
};

// All physical constants and coefficient fields of the coupled system.
struct ProblemParams {
  double D = 1.0;                       // road diffusivity, > 0
  double c = 0.0;                       // road drift
  std::array<double, 2> mu{1.0, 1.0};   // road -> field exchange rates, > 0
  std::array<double, 2> nu{1.0, 1.0};   // field -> road exchange rates, > 0
  std::array<SideParams, 2> side{};
  std::optional<CoefficientField> f;    // road potential f(x), default absent

  void validate() const {
    if (!(D > 0.0)) throw ParamError("road diffusivity D must be positive");
    for (int i = 0; i < 2; ++i) {
      if (!(side[i].d > 0.0)) throw ParamError("field diffusivity d must be positive");
      if (!(mu[i] > 0.0)) throw ParamError("exchange rate mu must be positive");
      if (!(nu[i] > 0.0)) throw ParamError("exchange rate nu must be positive");
    }
  }

  bool driftless() const {
    return c == 0.0 && side[0].c == 0.0 && side[1].c == 0.0;
  }

  double road_potential(double x) const { return f ? f->value(x, 0.0) : 0.0; }
};

}  // namespace roadfield

#endif
