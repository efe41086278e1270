#include "fqnm/quantisation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fqnm/errors.hpp"

namespace fqnm {

Resolution::Resolution(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("quantisation resolution must be positive and finite, got " +
                      std::to_string(delta));
  }
}

QuantisedField::QuantisedField(std::vector<State> states, Resolution resolution)
    : states_(std::move(states)), resolution_(resolution) {
  if (states_.size() < 2) {
    throw ConfigError("a quantised field needs at least 2 cells");
  }
}

State round_to_int(double x) {
  if (!std::isfinite(x)) {
    throw ConfigError("round_to_int: non-finite input");
  }
  // std::llround rounds half away from zero.
  constexpr double kLimit = 9.2e18;
  if (std::fabs(x) > kLimit) {
    throw NumericalError("round_to_int: value out of 64-bit range: " + std::to_string(x));
  }
  return static_cast<State>(std::llround(x));
}

QuantisedField quantise(std::span<const double> u, Resolution resolution) {
  std::vector<State> q(u.size());
  const double delta = resolution.delta();
  for (std::size_t i = 0; i < u.size(); ++i) {
    q[i] = round_to_int(u[i] / delta);
  }
  return QuantisedField(std::move(q), resolution);
}

ReconstructedField reconstruct(const QuantisedField& q) {
  ReconstructedField out{std::vector<double>(q.size()), q.resolution()};
  const double delta = q.resolution().delta();
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.values[i] = delta * static_cast<double>(q[i]);
  }
  return out;
}

}  // namespace fqnm
