#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "fqnm/quantisation.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm {

using TwoPointFlux = std::function<double(double, double)>;

/// Exact Godunov flux for the two scalar laws (convex Burgers with sonic point 0).
TwoPointFlux godunov_flux(const ScalarLaw& law);

/// Classical unsplit Lax-Friedrichs flux (f(uL)+f(uR))/2 - alpha/2 (uR-uL).
TwoPointFlux lax_friedrichs_flux(const ScalarLaw& law, double alpha);

/// Quantised interface rule Phi(qL,qR) = round(F(delta qL, delta qR) * dt/dx / delta).
class InterfaceMap {
 public:
  InterfaceMap(TwoPointFlux flux, SchemeParams params, std::string name);

  State operator()(State ql, State qr) const;
  const SchemeParams& params() const noexcept { return params_; }
  const std::string& name() const noexcept { return name_; }

 private:
  TwoPointFlux flux_;
  SchemeParams params_;
  std::string name_;
};

InterfaceMap quantised_two_point_flux(TwoPointFlux flux, const SchemeParams& params,
                                      std::string name);

/// Conservative update driven by a two-point rule instead of split maps.
QuantisedField step(const QuantisedField& q, const InterfaceMap& rule, InterfaceObserver* observer = nullptr);

using InterfacePair = std::pair<State, State>;

/// Records every (qL, qR) pair seen by a step.
class VisitedPairs : public InterfaceObserver {
 public:
  void on_interface(std::size_t, State ql, State qr, State) override { pairs_.emplace(ql, qr); }
  const std::set<InterfacePair>& pairs() const noexcept { return pairs_; }

 private:
  std::set<InterfacePair> pairs_;
};

struct TableDisagreement {
  std::size_t step = 0;             // step whose interface fluxes disagreed (0-based)
  std::size_t interface_index = 0;  // interface i+1/2
  InterfacePair pair;
  State phi_first = 0;
  State phi_second = 0;
};

struct EquivalenceReport {
  bool identical = true;
  std::size_t steps_run = 0;
  /// Set when the states differ: the step after which they first differ and
  /// the first differing cell.
  std::optional<std::size_t> divergence_step;
  std::optional<std::size_t> divergence_cell;
  /// Table disagreement responsible for the divergence (adjacent to the cell).
  std::optional<TableDisagreement> witness;
  /// First disagreement seen on any visited pair, whether or not it changed
  /// the trajectory (disagreements on adjacent faces can cancel).
  std::optional<TableDisagreement> first_disagreement;
  std::set<InterfacePair> visited;

  bool tables_agree_on_visited() const noexcept { return !first_disagreement.has_value(); }
  std::string describe() const;
};

/// Runs both rules in lockstep from q0 for `steps` steps and stops at the first
/// state divergence.
EquivalenceReport trajectories_identical(const InterfaceMap& first, const InterfaceMap& second,
                                         const QuantisedField& q0, std::size_t steps);

}  // namespace fqnm
