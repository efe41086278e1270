#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fqnm/quantisation.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm::testing {

inline std::vector<State> random_states(std::mt19937_64& rng, std::size_t n, State lo, State hi) {
  std::uniform_int_distribution<State> d(lo, hi);
  std::vector<State> q(n);
  for (auto& v : q) v = d(rng);
  return q;
}

/// Split, parameters and tabulated maps for a Burgers state range, with
/// alpha = inflation * max|u| and dt chosen so that nu equals `nu`.
struct BurgersSetup {
  FluxSplit split;
  SchemeParams params;
  TransferMaps maps;
};

inline BurgersSetup burgers_setup(double delta, State lo, State hi, double nu, double inflation = 1.0,
                                  double dx = 1.0 / 64.0) {
  const double umax = delta * static_cast<double>(std::max(std::abs(lo), std::abs(hi)));
  const double alpha = std::max(umax * inflation, delta);
  const ScalarLaw law = ScalarLaw::burgers();
  const FluxSplit split =
      lax_friedrichs_split(law, alpha, {delta * static_cast<double>(lo), delta * static_cast<double>(hi)});
  const SchemeParams params = make_params(delta, dx, nu * dx / alpha, alpha);
  return {split, params, build_transfer_maps(split, params, StateRange{lo, hi})};
}

inline BurgersSetup advection_setup(double delta, double a, double nu, State lo, State hi,
                                    double dx = 1.0 / 64.0) {
  const ScalarLaw law = ScalarLaw::advection(a);
  const double alpha = std::fabs(a);
  const FluxSplit split =
      lax_friedrichs_split(law, alpha, {delta * static_cast<double>(lo), delta * static_cast<double>(hi)});
  const SchemeParams params = make_params(delta, dx, nu * dx / alpha, alpha);
  return {split, params, build_transfer_maps(split, params, StateRange{lo, hi})};
}

}  // namespace fqnm::testing
