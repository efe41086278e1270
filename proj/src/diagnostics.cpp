#include "fqnm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fqnm/errors.hpp"

namespace fqnm {

State total_mass(std::span<const State> q) {
  State sum = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (__builtin_add_overflow(sum, q[i], &sum)) {
      throw NumericalError("total_mass overflow at cell " + std::to_string(i));
    }
  }
  return sum;
}

State total_variation(std::span<const State> q) {
  const std::size_t n = q.size();
  State tv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const State d = q[i + 1 == n ? 0 : i + 1] - q[i];
    tv += d < 0 ? -d : d;
  }
  return tv;
}

State l1_distance(std::span<const State> a, std::span<const State> b) {
  if (a.size() != b.size()) throw ConfigError("l1_distance: length mismatch");
  State s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const State d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

double relative_l2_error(std::span<const double> u, std::span<const double> ref) {
  if (u.size() != ref.size()) throw ConfigError("relative_l2_error: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double l1_error(std::span<const double> u, std::span<const double> ref, double dx) {
  if (u.size() != ref.size()) throw ConfigError("l1_error: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::fabs(u[i] - ref[i]);
  return s * dx;
}

std::optional<std::string> check_monotone_step(std::span<const State> before,
                                               std::span<const State> after) {
  std::ostringstream os;
  const State m0 = total_mass(before);
  const State m1 = total_mass(after);
  if (m0 != m1) {
    os << "mass changed " << m0 << " -> " << m1;
    return os.str();
  }
  const auto [lo_it, hi_it] = std::minmax_element(before.begin(), before.end());
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (after[i] < *lo_it || after[i] > *hi_it) {
      os << "maximum principle violated at cell " << i << ": " << after[i] << " outside ["
         << *lo_it << "," << *hi_it << "]";
      return os.str();
    }
  }
  const State tv0 = total_variation(before);
  const State tv1 = total_variation(after);
  if (tv1 > tv0) {
    os << "total variation increased " << tv0 << " -> " << tv1;
    return os.str();
  }
  return std::nullopt;
}

std::vector<double> consistency_residual(const QuantisedField& q, const TransferMaps& maps,
                                         const FluxSplit& split, const SchemeParams& params) {
  const QuantisedField next = step(q, maps);
  const std::size_t n = q.size();
  const double delta = params.delta.delta();
  const double ratio = params.ratio();
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    flux[i] = split.numerical_flux(delta * static_cast<double>(q[i]),
                                   delta * static_cast<double>(q[i + 1 == n ? 0 : i + 1]));
  }
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double classical = -ratio * (flux[i] - flux[i == 0 ? n - 1 : i - 1]);
    const double quantised = delta * static_cast<double>(next[i] - q[i]);
    r[i] = std::fabs(quantised - classical);
  }
  return r;
}

LevelDistribution::LevelDistribution(std::map<State, std::size_t> counts, std::size_t cells)
    : counts_(std::move(counts)), cells_(cells) {}

double LevelDistribution::probability(State level) const {
  const auto it = counts_.find(level);
  return it == counts_.end() ? 0.0
                             : static_cast<double>(it->second) / static_cast<double>(cells_);
}

std::vector<double> LevelDistribution::probabilities() const {
  std::vector<double> p;
  p.reserve(counts_.size());
  for (const auto& [level, c] : counts_) {
    p.push_back(static_cast<double>(c) / static_cast<double>(cells_));
  }
  return p;
}

LevelDistribution level_distribution(std::span<const State> q) {
  std::map<State, std::size_t> counts;
  for (const State s : q) ++counts[s];
  return LevelDistribution(std::move(counts), q.size());
}

double discrete_entropy(std::span<const double> p) {
  // Neumaier summation; many equal terms otherwise drift by hundreds of ulp
  double s = 0.0, c = 0.0;
  for (const double pk : p) {
    if (!(pk > 0.0)) continue;
    const double term = -pk * std::log(pk);
    const double t = s + term;
    c += std::fabs(s) >= std::fabs(term) ? (s - t) + term : (term - t) + s;
    s = t;
  }
  return s + c;
}

double discrete_entropy(const LevelDistribution& p) { return discrete_entropy(p.probabilities()); }

double effective_levels(std::span<const double> p) { return std::exp(discrete_entropy(p)); }

double effective_levels(const LevelDistribution& p) { return std::exp(discrete_entropy(p)); }

LevelTransitionMatrix::LevelTransitionMatrix(
    std::map<std::pair<State, State>, std::size_t> transitions,
    std::map<State, std::size_t> source_counts, std::map<State, std::size_t> target_counts,
    std::size_t cells)
    : transitions_(std::move(transitions)),
      source_counts_(std::move(source_counts)),
      target_counts_(std::move(target_counts)),
      cells_(cells) {}

double LevelTransitionMatrix::entry(State target, State source) const {
  const auto c = source_counts_.find(source);
  if (c == source_counts_.end()) return 0.0;
  const auto it = transitions_.find({target, source});
  if (it == transitions_.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(c->second);
}

double LevelTransitionMatrix::column_sum(State source) const {
  double s = 0.0;
  for (const auto& [key, count] : transitions_) {
    if (key.second == source) s += entry(key.first, key.second);
  }
  return s;
}

double LevelTransitionMatrix::row_sum(State target) const {
  double s = 0.0;
  for (const auto& [key, count] : transitions_) {
    if (key.first == target) s += entry(key.first, key.second);
  }
  return s;
}

std::map<State, double> LevelTransitionMatrix::apply(const LevelDistribution& p) const {
  std::map<State, double> out;
  for (const auto& [key, count] : transitions_) {
    out[key.first] += entry(key.first, key.second) * p.probability(key.second);
  }
  return out;
}

LevelTransitionMatrix level_transition_matrix(std::span<const State> q_n,
                                              std::span<const State> q_np1) {
  if (q_n.size() != q_np1.size()) {
    throw ConfigError("level_transition_matrix: snapshots differ in length");
  }
  std::map<std::pair<State, State>, std::size_t> transitions;
  std::map<State, std::size_t> source, target;
  for (std::size_t i = 0; i < q_n.size(); ++i) {
    ++transitions[{q_np1[i], q_n[i]}];
    ++source[q_n[i]];
    ++target[q_np1[i]];
  }
  return LevelTransitionMatrix(std::move(transitions), std::move(source), std::move(target),
                               q_n.size());
}

double bistochastic_defect(const LevelTransitionMatrix& m) {
  std::map<State, double> rows;
  for (const auto& [key, count] : m.transitions()) {
    rows[key.first] += m.entry(key.first, key.second);
  }
  double defect = 0.0;
  for (const auto& [level, sum] : rows) defect = std::max(defect, std::fabs(sum - 1.0));
  return defect;
}

double entropy_rate(double s_n, double s_np1, double dt) {
  if (!(dt > 0.0)) throw ConfigError("entropy_rate: dt must be positive");
  return (s_np1 - s_n) / dt;
}

namespace {

std::size_t steepest(std::span<const double> u, bool periodic, double sign) {
  const std::size_t n = u.size();
  if (n < 2) throw ConfigError("shock location needs at least two cells");
  const std::size_t last = periodic ? n : n - 1;
  std::size_t best = 0;
  double best_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < last; ++i) {
    const double drop = sign * (u[i] - u[i + 1 == n ? 0 : i + 1]);
    if (drop > best_drop) {
      best_drop = drop;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::size_t steepest_descent_cell(std::span<const double> u, bool periodic) {
  return steepest(u, periodic, 1.0);
}

std::size_t steepest_ascent_cell(std::span<const double> u, bool periodic) {
  return steepest(u, periodic, -1.0);
}

double transition_width(std::span<const double> u, std::size_t shock_cell, double left_value,
                        double right_value, std::size_t search_radius) {
  const double jump = left_value - right_value;
  if (jump == 0.0) throw ConfigError("transition_width: zero jump");
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  auto s = [&](std::ptrdiff_t j) {
    return (u[static_cast<std::size_t>(j)] - right_value) / jump;
  };
  auto crossing = [&](double level) -> double {
    const auto centre = static_cast<std::ptrdiff_t>(shock_cell);
    const auto radius = static_cast<std::ptrdiff_t>(search_radius);
    for (std::ptrdiff_t r = 0; r <= radius; ++r) {
      for (const std::ptrdiff_t j : {centre - r, centre + r}) {
        if (j < 0 || j + 1 >= n) continue;
        const double a = s(j);
        const double b = s(j + 1);
        if (a >= level && b < level) {
          return static_cast<double>(j) + (a - level) / (a - b);
        }
      }
    }
    std::ostringstream os;
    os << "transition_width: level " << level << " not crossed within " << search_radius
       << " cells of cell " << shock_cell;
    throw CheckFailure(os.str());
  };
  return crossing(0.1) - crossing(0.9);
}

}  // namespace fqnm
