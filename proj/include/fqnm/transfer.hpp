#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fqnm/quantisation.hpp"

namespace fqnm {

/// Scalar flux laws used by the benchmarks: linear advection f(u)=a*u and
/// inviscid Burgers f(u)=u^2/2.
struct ScalarLaw {
  enum class Kind { Advection, Burgers };

  Kind kind = Kind::Advection;
  double speed = 1.0;  // advection speed; unused for Burgers

  static ScalarLaw advection(double a) { return {Kind::Advection, a}; }
  static ScalarLaw burgers() { return {Kind::Burgers, 0.0}; }

  double flux(double u) const noexcept {
    return kind == Kind::Advection ? speed * u : 0.5 * u * u;
  }
  double derivative(double u) const noexcept {
    return kind == Kind::Advection ? speed : u;
  }
  std::string name() const;
};

struct StateInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// max |f'(u)| over the interval, multiplied by `inflation`.
double wave_speed_bound(const ScalarLaw& law, StateInterval interval, double inflation = 1.0);

/// Lax-Friedrichs splitting f = f+ + f-, f+- = (f(u) +- alpha*u)/2.
class FluxSplit {
 public:
  FluxSplit(ScalarLaw law, double alpha) : law_(law), alpha_(alpha) {}

  double plus(double u) const noexcept { return 0.5 * (law_.flux(u) + alpha_ * u); }
  double minus(double u) const noexcept { return 0.5 * (law_.flux(u) - alpha_ * u); }
  double flux(double u) const noexcept { return law_.flux(u); }
  /// Classical split two-point flux F(uL, uR) = f+(uL) + f-(uR).
  double numerical_flux(double ul, double ur) const noexcept { return plus(ul) + minus(ur); }

  const ScalarLaw& law() const noexcept { return law_; }
  double alpha() const noexcept { return alpha_; }

 private:
  ScalarLaw law_;
  double alpha_;
};

/// Builds the split and validates alpha >= max|f'| plus the monotonicity of
/// both parts by sampling the working interval. Throws ConfigError otherwise.
FluxSplit lax_friedrichs_split(const ScalarLaw& law, double alpha, StateInterval working,
                               std::size_t samples = 1001);

struct SchemeParams {
  Resolution delta;
  double dx;
  double dt;
  double alpha;

  /// CFL number nu = alpha * dt / dx.
  double nu() const noexcept { return alpha * dt / dx; }
  double ratio() const noexcept { return dt / dx; }
};

/// Validating constructor: dx > 0, dt > 0, alpha >= 0.
SchemeParams make_params(double delta, double dx, double dt, double alpha);

struct CflReport {
  double nu;
  bool valid;  // nu <= 1
};

CflReport cfl_check(const SchemeParams& p);

/// Counters for the online arithmetic of one or more steps, grouped by the
/// operation classes of the per-cell cost comparison.
struct OpCounts {
  std::uint64_t int_add_sub = 0;
  std::uint64_t map_evaluations = 0;
  std::uint64_t real_flux_evaluations = 0;
  std::uint64_t real_mul_add = 0;

  OpCounts& operator+=(const OpCounts& o) noexcept;
};

enum class Direction { Plus, Minus };

struct StateRange {
  State lo;
  State hi;
};

/// Integer transfer map phi(q) = round(f+-(delta*q) * dt/dx / delta).
///
/// The closed form is the definition. A map may carry a table over a
/// contiguous state range; lookups inside the range return the table entry,
/// anything outside falls back to the closed form.
class TransferMap {
 public:
  TransferMap(Direction direction, FluxSplit split, SchemeParams params);

  State operator()(State q) const {
    if (table_) {
      const auto k = static_cast<std::uint64_t>(q - table_lo_);
      if (k < table_->size()) return (*table_)[k];
    }
    return closed_form(q);
  }

  /// Same as operator() but records whether a table hit or a real flux
  /// evaluation happened.
  State evaluate(State q, OpCounts& counts) const;

  State closed_form(State q) const;

  /// Copy of this map with a table over [range.lo, range.hi].
  TransferMap tabulated(StateRange range) const;

  std::optional<StateRange> table_range() const;
  Direction direction() const noexcept { return direction_; }
  const SchemeParams& params() const noexcept { return params_; }
  const FluxSplit& split() const noexcept { return split_; }
  std::string provenance() const;

  /// Raw table access for the tight kernels; empty when untabulated.
  std::span<const State> table() const noexcept {
    return table_ ? std::span<const State>(*table_) : std::span<const State>{};
  }
  State table_lo() const noexcept { return table_lo_; }

 private:
  Direction direction_;
  FluxSplit split_;
  SchemeParams params_;
  std::shared_ptr<const std::vector<State>> table_;
  State table_lo_ = 0;
};

struct TransferMaps {
  TransferMap plus;
  TransferMap minus;
};

/// phi+ and phi- for one parameter set. Maps are immutable; new parameters
/// need new maps.
TransferMaps build_transfer_maps(const FluxSplit& split, const SchemeParams& params,
                                 std::optional<StateRange> table_range = std::nullopt);

/// F(qL, qR) = phi+(qL) + phi-(qR).
inline State interface_flux(const TransferMaps& maps, State ql, State qr) {
  return maps.plus(ql) + maps.minus(qr);
}

/// Receives every interface evaluated during a step.
class InterfaceObserver {
 public:
  virtual ~InterfaceObserver() = default;
  virtual void on_interface(std::size_t interface_index, State ql, State qr, State flux) = 0;
};

struct StepHooks {
  InterfaceObserver* observer = nullptr;
  OpCounts* counts = nullptr;
};

/// One conservative update q'_i = q_i - (F_{i+1/2} - F_{i-1/2}) on a periodic grid.
QuantisedField step(const QuantisedField& q, const TransferMaps& maps, StepHooks hooks = {});

/// Allocation-free kernel used by `step` and the timing harness. `flux` must
/// have the same length as `q`; `out` receives the new states.
void step_kernel(std::span<const State> q, std::span<State> flux, std::span<State> out,
                 const TransferMaps& maps);

/// First q in [lo, hi) where the per-cell update q - phi+(q) + phi-(q) decreases
/// from q to q+1. Without such a point the rounded scheme is monotone on the
/// range; with one, maximum principle and TVD can fail.
std::optional<State> find_monotonicity_defect(const TransferMaps& maps, StateRange range);

// ---------------------------------------------------------------------------
// Cartesian grids

/// Row-major integer field on a periodic Cartesian grid; the last extent
/// varies fastest.
class GridField {
 public:
  GridField(std::vector<std::size_t> extents, std::vector<State> states, Resolution resolution);

  std::size_t dimension() const noexcept { return extents_.size(); }
  std::span<const std::size_t> extents() const noexcept { return extents_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const State> states() const noexcept { return states_; }
  std::span<State> states() noexcept { return states_; }
  Resolution resolution() const noexcept { return resolution_; }

  std::size_t index(std::span<const std::size_t> multi) const;

  friend bool operator==(const GridField& a, const GridField& b) noexcept {
    return a.extents_ == b.extents_ && a.states_ == b.states_;
  }

 private:
  std::vector<std::size_t> extents_;
  std::vector<State> states_;
  Resolution resolution_;
};

/// Directional composition q' = q - sum_m (F_{i+e_m/2} - F_{i-e_m/2}), one
/// pair of maps per direction.
GridField step_nd(const GridField& grid, std::span<const TransferMaps> per_direction);

}  // namespace fqnm
