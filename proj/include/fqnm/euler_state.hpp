#pragma once

#include <array>
#include <cmath>

namespace fqnm {

struct IdealGas {
  double gamma = 1.4;
};

struct EulerPrimitive {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;
};

/// Conservative triple (density, momentum density, total energy density).
struct EulerConservative {
  double rho = 1.0;
  double m = 0.0;
  double E = 1.0;
};

using EulerFlux = std::array<double, 3>;

inline EulerConservative to_conservative(const EulerPrimitive& w, const IdealGas& gas) {
  return {w.rho, w.rho * w.u, w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.u * w.u};
}

inline EulerPrimitive to_primitive(const EulerConservative& c, const IdealGas& gas) {
  const double u = c.m / c.rho;
  return {c.rho, u, (gas.gamma - 1.0) * (c.E - 0.5 * c.m * u)};
}

inline double sound_speed(const EulerPrimitive& w, const IdealGas& gas) {
  return std::sqrt(gas.gamma * w.p / w.rho);
}

}  // namespace fqnm
