#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fqnm/scalar_problems.hpp"

namespace fqnm {

enum class Experiment { Advect, BandSweep, Burgers, Sod, Equivalence, Bench };

std::string to_string(Experiment e);
/// advect, band-sweep, burgers, sod, equivalence, bench; throws ConfigError.
Experiment parse_experiment(const std::string& name);

/// Everything a command needs. Round-trips through the flat key=value format.
struct ExperimentSpec {
  Experiment experiment = Experiment::Advect;
  std::vector<Scheme> schemes;
  std::size_t cells = 256;
  std::optional<double> delta;  // "auto" picks the per-experiment default
  double cfl = 1.0;
  double t_final = 1.0;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::size_t record_every = 0;

  // advect / band-sweep
  double speed = 1.0;
  double frequency = 16.0;
  double sigma = 0.1;
  std::vector<std::size_t> sweep_cells;

  // burgers
  std::size_t hopf_lax_candidates = 2048;

  // sod
  double zoom_lo = 0.84;
  double zoom_hi = 0.86;

  // equivalence
  std::size_t runs = 100;
  std::size_t steps = 50;

  // bench
  std::size_t reps = 5;
  std::size_t warmups = 2;
  std::size_t ladder_min_log2 = 10;
  std::size_t ladder_max_log2 = 18;

  std::size_t threads = 0;  // 0 uses the hardware concurrency
};

/// Defaults for one experiment.
ExperimentSpec default_spec(Experiment e);

/// key=value lines in a fixed order, one per field.
std::string serialize(const ExperimentSpec& spec);
/// Single-line form for CSV metadata.
std::string serialize_inline(const ExperimentSpec& spec);

/// Applies key=value assignments on top of `base`. Blank lines and '#'
/// comments are ignored; unknown keys and malformed values throw ConfigError.
ExperimentSpec parse_spec(const std::string& text, ExperimentSpec base);
ExperimentSpec apply_overrides(const std::map<std::string, std::string>& kv, ExperimentSpec base);
ExperimentSpec load_spec(const std::string& path, ExperimentSpec base);

/// Range checks shared by every command; throws ConfigError.
void validate(const ExperimentSpec& spec);

}  // namespace fqnm
