#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fqnm/euler_state.hpp"

namespace fqnm {

using Profile = std::function<double(double)>;

/// u0((x - a t) mod 1) on the unit periodic domain.
double exact_advection(const Profile& u0, double a, double t, double x);

/// Entropy solution of Burgers' equation by the Hopf-Lax formula
///   u(x,t) = (x - y*)/t,  y* = argmin_y U0(y) + (x-y)^2/(2t)
/// with y restricted to `n_candidates` uniformly spaced points in
/// [x - w, x + w], w = max|u0| t + 1. Ties keep the smallest y.
class HopfLaxBurgers {
 public:
  HopfLaxBurgers(Profile u0, Profile antiderivative, double max_abs_u0,
                 std::size_t n_candidates = 2048);

  double evaluate(double x, double t) const;
  /// Values at the given points.
  std::vector<double> sample(std::span<const double> x, double t) const;

  std::size_t n_candidates() const noexcept { return n_candidates_; }
  /// Spacing of the candidate grid at time t.
  double candidate_spacing(double t) const;
  std::string provenance() const;

 private:
  Profile u0_;
  Profile antiderivative_;
  double max_abs_u0_;
  std::size_t n_candidates_;
};

/// Reference for u0(x) = 0.5 + sin(2 pi x), with U0(y) = 0.5 y - cos(2 pi y)/(2 pi)
/// on the real line.
HopfLaxBurgers burgers_sine_reference(std::size_t n_candidates = 2048);

/// Exact solution of the Riemann problem for the ideal-gas Euler equations.
class ExactRiemann {
 public:
  /// Newton iteration on the pressure function from the two-rarefaction guess.
  /// Throws NumericalError on vacuum generation or if 100 iterations do not
  /// reach |dp| <= 1e-12.
  ExactRiemann(EulerPrimitive left, EulerPrimitive right, IdealGas gas = {});

  double star_pressure() const noexcept { return p_star_; }
  double star_velocity() const noexcept { return u_star_; }
  double star_density_left() const noexcept { return rho_star_left_; }
  double star_density_right() const noexcept { return rho_star_right_; }
  int iterations() const noexcept { return iterations_; }

  /// Solution on the ray xi = x / t.
  EulerPrimitive sample(double xi) const;

  /// Largest |u| + a over all states of the wave fan, and all wave speeds.
  double max_signal_speed() const;

 private:
  double pressure_function(double p, const EulerPrimitive& k, double a, double& derivative) const;

  EulerPrimitive left_, right_;
  IdealGas gas_;
  double a_left_, a_right_;
  double p_star_ = 0.0;
  double u_star_ = 0.0;
  double rho_star_left_ = 0.0;
  double rho_star_right_ = 0.0;
  int iterations_ = 0;
};

/// Exact Riemann solution at (x, t) with the initial discontinuity at `diaphragm`.
EulerPrimitive exact_sod(double x, double t, const EulerPrimitive& left,
                         const EulerPrimitive& right, IdealGas gas = {}, double diaphragm = 0.5);

}  // namespace fqnm
