#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fqnm/bench.hpp"
#include "fqnm/csv.hpp"
#include "fqnm/equivalence.hpp"
#include "fqnm/euler_state.hpp"
#include "fqnm/experiment_config.hpp"
#include "fqnm/references.hpp"
#include "fqnm/scalar_problems.hpp"

namespace fqnm {

/// Result of one CLI command: named CSV tables plus human-readable lines.
/// `failures` lists violated run invariants; the CLI exits 1 when non-empty.
struct CommandOutput {
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<std::string> summary;
  std::vector<std::string> failures;
};

/// Writes every table under `dir` and returns the paths written.
std::vector<std::filesystem::path> write_outputs(const CommandOutput& out,
                                                 const std::filesystem::path& dir);

/// step, mass, tv, S, N_eff, rho_defect, l1_vs_ref, l2rel_vs_ref, time, mass_real.
/// The mass column is the integer total for FQNM and the real sum otherwise.
CsvTable run_record_table(const RunRecord& rec);

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0: hardware).
/// The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

// --- band sweep ------------------------------------------------------------

std::vector<double> default_bands();  // pi/8, pi/4, pi/2, 3pi/4

struct BandPoint {
  double band = 0.0;
  std::size_t n_cells = 0;
  double frequency = 0.0;
  double k0_dx = 0.0;
  Scheme scheme = Scheme::FQNM;
  double rel_l2 = 0.0;
};

struct BandSummary {
  double band = 0.0;
  Scheme scheme = Scheme::FQNM;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t realizations = 0;
};

struct BandSweepResult {
  std::vector<BandPoint> points;
  std::vector<BandSummary> summary;
  std::vector<std::string> notes;  // skipped realizations

  const BandSummary& find(double band, Scheme scheme) const;
};

/// For each band and each n in spec.sweep_cells, f = round(band n / 2 pi);
/// runs every scheme in spec.schemes on the Gaussian packet to spec.t_final
/// and measures the relative L2 error against the exact shift.
BandSweepResult band_sweep(const ExperimentSpec& spec, std::span<const double> bands);

// --- Burgers ---------------------------------------------------------------

struct EntropyStep {
  std::size_t step = 0;
  double time = 0.0;
  double entropy = 0.0;
  double delta_entropy = 0.0;  // S^n - S^{n-1}
  double rate = 0.0;
  double rho_defect = 0.0;
};

struct BurgersComparison {
  RunRecord fqnm;
  RunRecord baseline;  // upwind split FV with the same split, dx and dt
  std::vector<double> x;
  std::vector<double> reference;  // Hopf-Lax at the final time
  std::size_t reference_shock_cell = 0;
  std::size_t fqnm_shock_cell = 0;
  std::size_t baseline_shock_cell = 0;
  double left_state = 0.0;  // reference values on either side of the shock
  double right_state = 0.0;
  std::optional<double> fqnm_width;  // unset if a 10/90% level is not crossed
  std::optional<double> baseline_width;
  double fqnm_l1 = 0.0;
  double baseline_l1 = 0.0;
  std::vector<EntropyStep> post_shock;  // FQNM steps after t = 1 / (2 pi)
};

/// Burgers sine data at spec.cells to spec.t_final, FQNM and upwind FV.
BurgersComparison burgers_comparison(const ExperimentSpec& spec);

// --- Sod -------------------------------------------------------------------

struct SodProfiles {
  std::vector<double> rho, u, p;
};

struct SodComparison {
  std::vector<double> x;
  SodProfiles exact, roe, fqnm;
  double dt = 0.0;
  std::size_t steps = 0;
  double max_cfl = 0.0;  // largest per-step CFL seen in either run
  double delta_rho = 0.0;
  double shock_position = 0.0;
  std::size_t shock_cell = 0;
  double l1_roe = 0.0;
  double l1_fqnm = 0.0;
  std::optional<double> width_roe;
  std::optional<double> width_fqnm;
  std::vector<State> mass_trace;     // sum q_rho at every step, including 0
  std::vector<State> boundary_flux;  // F_left - F_right at every step
  double star_pressure = 0.0;
  double star_velocity = 0.0;
  double star_density_left = 0.0;
  double star_density_right = 0.0;
};

inline constexpr EulerPrimitive kSodLeft{1.0, 0.0, 1.0};
inline constexpr EulerPrimitive kSodRight{0.125, 0.0, 0.1};

/// Paired Roe / density-quantised runs on canonical Sod data with a fixed
/// dt = T / ceil(T / (cfl dx / S)), S the largest exact signal speed.
/// delta defaults to rho_L / 1000.
SodComparison sod_comparison(const ExperimentSpec& spec);

// --- transfer-operator equivalence ----------------------------------------

struct EquivalenceCase {
  std::string law;
  std::size_t run = 0;
  EquivalenceReport report;
  /// identical == tables_agree_on_visited, and a divergence carries a witness
  /// whose two table values differ.
  bool consistent = true;
};

struct EquivalenceStudy {
  std::vector<EquivalenceCase> cases;
  std::size_t advection_identical = 0;
  std::size_t advection_runs = 0;
  std::size_t burgers_identical = 0;
  std::size_t burgers_runs = 0;
  std::size_t inconsistent = 0;
  /// Exhaustive Godunov vs LF comparison for Burgers over [-10, 10]^2.
  std::size_t table_pairs = 0;
  std::size_t table_agreements = 0;
};

/// spec.runs random initial states per law (spec.cells cells, spec.steps steps).
EquivalenceStudy equivalence_study(const ExperimentSpec& spec);

// --- commands ----------------------------------------------------------------

CommandOutput cmd_advect(const ExperimentSpec& spec);
CommandOutput cmd_band_sweep(const ExperimentSpec& spec);
CommandOutput cmd_burgers(const ExperimentSpec& spec);
CommandOutput cmd_sod(const ExperimentSpec& spec);
CommandOutput cmd_equivalence(const ExperimentSpec& spec);
CommandOutput cmd_bench(const ExperimentSpec& spec);

/// Dispatches on spec.experiment.
CommandOutput run_experiment(const ExperimentSpec& spec);

}  // namespace fqnm
