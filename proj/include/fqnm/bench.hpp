#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fqnm/scalar_problems.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm {

struct TimingOptions {
  std::size_t reps = 5;
  std::size_t warmups = 2;
  /// Steps per repetition are chosen so one repetition touches about this
  /// many cell updates (at least 4 steps).
  std::size_t work_per_rep = std::size_t{1} << 22;
};

/// Wall-clock cost of one step on the Burgers sine problem.
struct TimingReport {
  Scheme scheme = Scheme::FQNM;
  std::size_t n_cells = 0;
  std::size_t steps = 0;            // steps per repetition
  std::vector<double> samples;      // seconds per step, one per repetition
  double median = 0.0;              // seconds per step
  std::string baseline;             // name of the scheme the speedup refers to
  double speedup = 0.0;             // baseline median / this median; 0 if unset
  OpCounts ops_per_step;            // from one instrumented step
};

/// Times `scheme` (FQNM or UpwindFV) on n_cells cells; throws ConfigError for
/// other schemes or fewer than 5 repetitions.
TimingReport time_scheme(Scheme scheme, std::size_t n_cells, double cfl, const TimingOptions& opts);

/// Sets speedup/baseline on `report` relative to `baseline`.
void attach_speedup(TimingReport& report, const TimingReport& baseline);

double median(std::vector<double> xs);

/// Least-squares fit y = c x through the origin; r2 uses the total sum of
/// squares about the mean of y.
struct LinearFit {
  double slope = 0.0;
  double r2 = 0.0;
};
LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingStudy {
  std::vector<TimingReport> fqnm;
  std::vector<TimingReport> baseline;  // upwind FV at the same sizes
  LinearFit fqnm_fit;
  LinearFit baseline_fit;
};

/// Doubling ladder 2^min_log2 .. 2^max_log2. Repetitions are interleaved across
/// sizes and schemes; everything runs on one thread.
ScalingStudy scaling_ladder(std::size_t min_log2, std::size_t max_log2, double cfl,
                            const TimingOptions& opts, bool with_baseline = true);

}  // namespace fqnm
