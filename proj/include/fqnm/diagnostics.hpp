#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fqnm/quantisation.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm {

// --- conservation, variation, distances -----------------------------------

/// Exact integer sum; throws NumericalError on overflow.
State total_mass(std::span<const State> q);

/// Periodic total variation sum_i |q_{i+1} - q_i|.
State total_variation(std::span<const State> q);

State l1_distance(std::span<const State> a, std::span<const State> b);

/// ||u - ref||_2 / ||ref||_2.
double relative_l2_error(std::span<const double> u, std::span<const double> ref);

/// sum_i |u_i - ref_i| * dx.
double l1_error(std::span<const double> u, std::span<const double> ref, double dx);

/// Mass, maximum principle and TVD check for one periodic step. Returns a
/// human-readable description of the first violated property, if any.
std::optional<std::string> check_monotone_step(std::span<const State> before,
                                               std::span<const State> after);

/// Per-cell |delta * (q'_i - q_i) - du_i| where du is the real-valued split
/// finite-volume increment at u = delta * q. Bounded by 2 delta.
std::vector<double> consistency_residual(const QuantisedField& q, const TransferMaps& maps,
                                         const FluxSplit& split, const SchemeParams& params);

// --- level statistics ------------------------------------------------------

class LevelDistribution {
 public:
  explicit LevelDistribution(std::map<State, std::size_t> counts, std::size_t cells);

  std::size_t cells() const noexcept { return cells_; }
  const std::map<State, std::size_t>& counts() const noexcept { return counts_; }
  std::size_t occupied_levels() const noexcept { return counts_.size(); }
  double probability(State level) const;
  std::vector<double> probabilities() const;

 private:
  std::map<State, std::size_t> counts_;
  std::size_t cells_;
};

LevelDistribution level_distribution(std::span<const State> q);

/// Shannon entropy -sum p ln p (natural log); zero entries are skipped.
double discrete_entropy(std::span<const double> p);
double discrete_entropy(const LevelDistribution& p);

/// exp(S).
double effective_levels(std::span<const double> p);
double effective_levels(const LevelDistribution& p);

/// Empirical level-to-level transition frequencies between two snapshots.
/// Entries M(k', k) = N_{k'k} / c_k for source levels with c_k > 0.
class LevelTransitionMatrix {
 public:
  LevelTransitionMatrix(std::map<std::pair<State, State>, std::size_t> transitions,
                        std::map<State, std::size_t> source_counts,
                        std::map<State, std::size_t> target_counts, std::size_t cells);

  double entry(State target, State source) const;
  double column_sum(State source) const;
  double row_sum(State target) const;

  const std::map<State, std::size_t>& source_counts() const noexcept { return source_counts_; }
  const std::map<State, std::size_t>& target_counts() const noexcept { return target_counts_; }
  /// (target, source) -> count
  const std::map<std::pair<State, State>, std::size_t>& transitions() const noexcept {
    return transitions_;
  }

  /// (M p)_{k'} for a distribution over source levels.
  std::map<State, double> apply(const LevelDistribution& p) const;

 private:
  std::map<std::pair<State, State>, std::size_t> transitions_;
  std::map<State, std::size_t> source_counts_;
  std::map<State, std::size_t> target_counts_;
  std::size_t cells_;
};

LevelTransitionMatrix level_transition_matrix(std::span<const State> q_n,
                                              std::span<const State> q_np1);

/// max over occupied target rows of |row sum - 1|.
double bistochastic_defect(const LevelTransitionMatrix& m);

/// (S^{n+1} - S^n) / dt.
double entropy_rate(double s_n, double s_np1, double dt);

// --- shock structure -------------------------------------------------------

/// Cell i with the largest drop u_i - u_{i+1} (left cell of the steepest
/// descending interface). Ties go to the smallest index.
std::size_t steepest_descent_cell(std::span<const double> u, bool periodic);

/// Same for the largest rise u_{i+1} - u_i.
std::size_t steepest_ascent_cell(std::span<const double> u, bool periodic);

/// Width in cells of a jump from `left_value` to `right_value` located near
/// interface shock_cell + 1/2: the distance between the linearly interpolated
/// crossings of the 90% and 10% levels of the jump, each taken at the crossing
/// interface closest to the shock. A sharp one-interface jump measures 0.8.
/// Throws CheckFailure if either level is not crossed within the radius.
double transition_width(std::span<const double> u, std::size_t shock_cell, double left_value,
                        double right_value, std::size_t search_radius = 16);

}  // namespace fqnm
