#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fqnm {

using State = std::int64_t;

/// Physical magnitude of one quantum: u ~ delta * q.
class Resolution {
 public:
  explicit Resolution(double delta);
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

enum class Boundary { Periodic };

/// Integer cell states on a periodic 1D grid. The length is fixed at construction.
class QuantisedField {
 public:
  QuantisedField(std::vector<State> states, Resolution resolution);

  std::size_t size() const noexcept { return states_.size(); }
  Resolution resolution() const noexcept { return resolution_; }
  Boundary boundary() const noexcept { return Boundary::Periodic; }

  std::span<const State> states() const noexcept { return states_; }
  std::span<State> states() noexcept { return states_; }
  State operator[](std::size_t i) const noexcept { return states_[i]; }

  friend bool operator==(const QuantisedField& a, const QuantisedField& b) noexcept {
    return a.states_ == b.states_ && a.resolution_.delta() == b.resolution_.delta();
  }

 private:
  std::vector<State> states_;
  Resolution resolution_;
};

struct ReconstructedField {
  std::vector<double> values;
  Resolution resolution;
};

/// Nearest integer, ties away from zero. Throws ConfigError on non-finite input
/// and NumericalError when the result does not fit in State.
State round_to_int(double x);

QuantisedField quantise(std::span<const double> u, Resolution resolution);

ReconstructedField reconstruct(const QuantisedField& q);

}  // namespace fqnm
