#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fqnm/equivalence.hpp"
#include "fqnm/quantisation.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm {

enum class Scheme { FQNM, UpwindFV, LaxFriedrichs, WENO5RK3 };

std::string to_string(Scheme s);
/// Accepts fqnm, upwind, lf, weno5 (case-insensitive); throws ConfigError.
Scheme parse_scheme(const std::string& name);

struct InitialCondition {
  std::string name;
  std::function<double(double)> profile;
};

/// Scalar law on the periodic unit interval, sampled at cell centres
/// x_i = (i + 1/2) / n_cells.
struct ScalarProblem {
  ScalarLaw law;
  std::size_t n_cells = 128;
  InitialCondition initial;
  double final_time = 1.0;

  double dx() const noexcept { return 1.0 / static_cast<double>(n_cells); }
  std::vector<double> cell_centres() const;
  std::vector<double> initial_values() const;
};

/// Validates n_cells >= 8 and final_time > 0; throws ConfigError.
void validate(const ScalarProblem& problem);

struct GaussianPacket {
  double frequency = 16.0;  // cycles per unit length
  double sigma = 0.1;
  double center = 0.5;
  double amplitude = 1.0;

  double operator()(double x) const;
  /// k0 dx with k0 = 2 pi f.
  double normalised_frequency(std::size_t n_cells) const;
};

struct PacketSample {
  std::vector<double> values;
  double k0_dx;
  bool beyond_nyquist;  // k0 dx > pi; a warning, not an error
};

/// exp(-(x-c)^2 / (2 sigma^2)) sin(2 pi f x) at the cell centres.
PacketSample gaussian_packet_ic(std::size_t n_cells, const GaussianPacket& packet);

/// 0.5 + sin(2 pi x) at the cell centres.
std::vector<double> burgers_ic(std::size_t n_cells);

InitialCondition burgers_initial_condition();
InitialCondition packet_initial_condition(const GaussianPacket& packet);

struct RunConfig {
  Scheme scheme = Scheme::FQNM;
  double cfl = 0.5;
  /// Quantisation resolution; defaults to (max u0 - min u0) / 500.
  std::optional<double> delta;
  /// Wave-speed bound; defaults to |a| for advection and 1.1 max|u0| for Burgers.
  std::optional<double> alpha;
  /// With a defaulted alpha, raise alpha to cfl dx / dt after dt has been
  /// rounded to hit the final time, so that nu equals cfl.
  bool pin_cfl = true;
  std::size_t record_every = 0;  // 0 records only the initial and final states
  bool track_visited = false;
  bool track_entropy = false;
  /// Throw CheckFailure on a maximum-principle or TVD violation instead of
  /// recording it. Mass conservation is always enforced.
  bool strict_monotone = false;
  /// Reference profile for the per-record l1/l2 columns.
  std::function<std::vector<double>(double t)> reference;
};

struct Snapshot {
  std::size_t step = 0;
  double time = 0.0;
  std::vector<double> values;
  std::vector<State> states;  // FQNM only
};

/// Per-step diagnostics. Integer columns are meaningful for FQNM only;
/// `mass_real` is the reconstructed (or floating-point) total.
struct StepDiagnostics {
  std::size_t step = 0;
  double time = 0.0;
  State mass = 0;
  double mass_real = 0.0;
  State tv = 0;
  double entropy = 0.0;
  double effective_levels = 0.0;
  double rho_defect = 0.0;
  double l1_vs_ref = -1.0;
  double l2rel_vs_ref = -1.0;
};

struct RunRecord {
  Scheme scheme = Scheme::FQNM;
  SchemeParams params{Resolution(1.0), 1.0, 1.0, 0.0};
  std::size_t steps = 0;
  std::vector<Snapshot> snapshots;
  std::vector<StepDiagnostics> diagnostics;
  std::set<InterfacePair> visited;
  /// Verbatim maximum-principle / TVD counterexamples (FQNM, non-strict runs).
  std::vector<std::string> violations;
  OpCounts ops;

  const Snapshot& final_snapshot() const { return snapshots.back(); }
};

/// Time step for a run: dt = T / ceil(T / dt_cfl), dt_cfl = cfl dx / alpha,
/// so that the horizon is hit with uniform steps.
SchemeParams resolve_params(const ScalarProblem& problem, const RunConfig& config);

/// Integrates the problem to its final time. Refuses (ConfigError) when the
/// CFL number exceeds 1; throws NumericalError with the step index on
/// non-finite baseline states and CheckFailure on FQNM mass drift.
RunRecord run(const ScalarProblem& problem, const RunConfig& config);

}  // namespace fqnm
