#include "fqnm/references.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fqnm/errors.hpp"

namespace fqnm {

double exact_advection(const Profile& u0, double a, double t, double x) {
  double xi = std::fmod(x - a * t, 1.0);
  if (xi < 0.0) xi += 1.0;
  return u0(xi);
}

HopfLaxBurgers::HopfLaxBurgers(Profile u0, Profile antiderivative, double max_abs_u0,
                               std::size_t n_candidates)
    : u0_(std::move(u0)),
      antiderivative_(std::move(antiderivative)),
      max_abs_u0_(max_abs_u0),
      n_candidates_(n_candidates) {
  if (n_candidates_ < 2) throw ConfigError("HopfLaxBurgers: need at least 2 candidates");
}

double HopfLaxBurgers::candidate_spacing(double t) const {
  const double half_width = max_abs_u0_ * t + 1.0;
  return 2.0 * half_width / static_cast<double>(n_candidates_ - 1);
}

double HopfLaxBurgers::evaluate(double x, double t) const {
  if (t <= 0.0) return u0_(x);
  const double half_width = max_abs_u0_ * t + 1.0;
  const double h = candidate_spacing(t);
  const double y0 = x - half_width;
  double best_y = y0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_candidates_; ++j) {
    const double y = y0 + h * static_cast<double>(j);
    const double d = x - y;
    const double value = antiderivative_(y) + d * d / (2.0 * t);
    if (value < best) {
      best = value;
      best_y = y;
    }
  }
  return (x - best_y) / t;
}

std::vector<double> HopfLaxBurgers::sample(std::span<const double> x, double t) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = evaluate(x[i], t);
  return out;
}

std::string HopfLaxBurgers::provenance() const {
  std::ostringstream os;
  os << "Hopf-Lax minimisation, " << n_candidates_ << " uniform candidates, window x +- ("
     << max_abs_u0_ << " t + 1)";
  return os.str();
}

HopfLaxBurgers burgers_sine_reference(std::size_t n_candidates) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return HopfLaxBurgers([](double x) { return 0.5 + std::sin(two_pi * x); },
                        [](double y) { return 0.5 * y - std::cos(two_pi * y) / two_pi; }, 1.5,
                        n_candidates);
}

// ---------------------------------------------------------------------------

ExactRiemann::ExactRiemann(EulerPrimitive left, EulerPrimitive right, IdealGas gas)
    : left_(left), right_(right), gas_(gas) {
  if (!(left.rho > 0.0 && left.p > 0.0 && right.rho > 0.0 && right.p > 0.0)) {
    throw ConfigError("ExactRiemann: density and pressure must be positive");
  }
  const double g = gas_.gamma;
  a_left_ = sound_speed(left_, gas_);
  a_right_ = sound_speed(right_, gas_);
  if (2.0 / (g - 1.0) * (a_left_ + a_right_) <= right_.u - left_.u) {
    throw NumericalError("ExactRiemann: initial data generate vacuum");
  }

  const double z = (g - 1.0) / (2.0 * g);
  const double guess =
      std::pow((a_left_ + a_right_ - 0.5 * (g - 1.0) * (right_.u - left_.u)) /
                   (a_left_ / std::pow(left_.p, z) + a_right_ / std::pow(right_.p, z)),
               1.0 / z);
  double p = std::max(guess, 1e-14);
  bool converged = false;
  for (iterations_ = 1; iterations_ <= 100; ++iterations_) {
    double dfl = 0.0, dfr = 0.0;
    const double fl = pressure_function(p, left_, a_left_, dfl);
    const double fr = pressure_function(p, right_, a_right_, dfr);
    const double f = fl + fr + (right_.u - left_.u);
    double next = p - f / (dfl + dfr);
    if (next <= 0.0) next = 1e-14;
    const double change = std::fabs(next - p);
    p = next;
    if (change <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("ExactRiemann: Newton iteration did not converge");

  p_star_ = p;
  double dummy = 0.0;
  const double fl = pressure_function(p, left_, a_left_, dummy);
  const double fr = pressure_function(p, right_, a_right_, dummy);
  u_star_ = 0.5 * (left_.u + right_.u) + 0.5 * (fr - fl);

  const double gm = (g - 1.0) / (g + 1.0);
  auto star_density = [&](const EulerPrimitive& k) {
    const double ratio = p_star_ / k.p;
    if (p_star_ > k.p) return k.rho * (ratio + gm) / (gm * ratio + 1.0);
    return k.rho * std::pow(ratio, 1.0 / g);
  };
  rho_star_left_ = star_density(left_);
  rho_star_right_ = star_density(right_);
}

double ExactRiemann::pressure_function(double p, const EulerPrimitive& k, double a,
                                       double& derivative) const {
  const double g = gas_.gamma;
  if (p > k.p) {
    const double A = 2.0 / ((g + 1.0) * k.rho);
    const double B = (g - 1.0) / (g + 1.0) * k.p;
    const double root = std::sqrt(A / (p + B));
    derivative = root * (1.0 - 0.5 * (p - k.p) / (B + p));
    return (p - k.p) * root;
  }
  const double ratio = p / k.p;
  derivative = std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (k.rho * a);
  return 2.0 * a / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0);
}

EulerPrimitive ExactRiemann::sample(double xi) const {
  const double g = gas_.gamma;
  const double gm = (g - 1.0) / (g + 1.0);
  if (xi <= u_star_) {
    const auto& k = left_;
    const double a = a_left_;
    if (p_star_ > k.p) {
      const double s = k.u - a * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / k.p +
                                           (g - 1.0) / (2.0 * g));
      if (xi <= s) return k;
      return {rho_star_left_, u_star_, p_star_};
    }
    const double head = k.u - a;
    const double a_star = a * std::pow(p_star_ / k.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - a_star;
    if (xi <= head) return k;
    if (xi > tail) return {rho_star_left_, u_star_, p_star_};
    const double c = 2.0 / (g + 1.0) + gm / a * (k.u - xi);
    return {k.rho * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * k.u + xi),
            k.p * std::pow(c, 2.0 * g / (g - 1.0))};
  }
  const auto& k = right_;
  const double a = a_right_;
  if (p_star_ > k.p) {
    const double s = k.u + a * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / k.p +
                                         (g - 1.0) / (2.0 * g));
    if (xi >= s) return k;
    return {rho_star_right_, u_star_, p_star_};
  }
  const double head = k.u + a;
  const double a_star = a * std::pow(p_star_ / k.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + a_star;
  if (xi >= head) return k;
  if (xi < tail) return {rho_star_right_, u_star_, p_star_};
  const double c = 2.0 / (g + 1.0) - gm / a * (k.u - xi);
  return {k.rho * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * k.u + xi),
          k.p * std::pow(c, 2.0 * g / (g - 1.0))};
}

double ExactRiemann::max_signal_speed() const {
  const double g = gas_.gamma;
  const EulerPrimitive star_l{rho_star_left_, u_star_, p_star_};
  const EulerPrimitive star_r{rho_star_right_, u_star_, p_star_};
  double s = 0.0;
  for (const auto& w : {left_, right_, star_l, star_r}) {
    s = std::max(s, std::fabs(w.u) + sound_speed(w, gas_));
  }
  if (p_star_ > left_.p) {
    s = std::max(s, std::fabs(left_.u - a_left_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / left_.p +
                                                         (g - 1.0) / (2.0 * g))));
  }
  if (p_star_ > right_.p) {
    s = std::max(s, std::fabs(right_.u + a_right_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / right_.p +
                                                           (g - 1.0) / (2.0 * g))));
  }
  return s;
}

EulerPrimitive exact_sod(double x, double t, const EulerPrimitive& left,
                         const EulerPrimitive& right, IdealGas gas, double diaphragm) {
  if (t < 0.0) throw ConfigError("exact_sod: t must be nonnegative");
  if (t == 0.0) return x < diaphragm ? left : right;
  return ExactRiemann(left, right, gas).sample((x - diaphragm) / t);
}

}  // namespace fqnm
