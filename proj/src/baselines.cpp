#include "fqnm/baselines.hpp"

#include <cmath>
#include <string>

#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

void require_finite(std::span<const double> u, const char* where) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      throw NumericalError(std::string(where) + ": non-finite value at cell " + std::to_string(i));
    }
  }
}

constexpr double kWenoEps = 1e-6;

/// Left-biased fifth-order WENO value at the right face of the centre cell
/// of (a, b, c, d, e) = u_{i-2} .. u_{i+2}.
inline double weno5_face(double a, double b, double c, double d, double e) {
  const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
  const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
  const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
  const double s0 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c) +
                    0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
  const double s1 =
      13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) + 0.25 * (b - d) * (b - d);
  const double s2 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e) +
                    0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);
  const double w0 = 0.1 / ((kWenoEps + s0) * (kWenoEps + s0));
  const double w1 = 0.6 / ((kWenoEps + s1) * (kWenoEps + s1));
  const double w2 = 0.3 / ((kWenoEps + s2) * (kWenoEps + s2));
  return (w0 * q0 + w1 * q1 + w2 * q2) / (w0 + w1 + w2);
}

/// -a/dx (u_{i+1/2} - u_{i-1/2}) with upwind WENO face values.
void weno5_rhs(std::span<const double> u, double a, double dx, std::span<double> rhs,
               std::vector<double>& face) {
  const std::size_t n = u.size();
  auto at = [&](std::ptrdiff_t i) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return u[static_cast<std::size_t>(((i % nn) + nn) % nn)];
  };
  face.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    // face[k] is the value at x_{k+1/2}
    face[k] = a >= 0.0 ? weno5_face(at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2))
                       : weno5_face(at(i + 3), at(i + 2), at(i + 1), at(i), at(i - 1));
  }
  for (std::size_t k = 0; k < n; ++k) {
    rhs[k] = -a / dx * (face[k] - face[k == 0 ? n - 1 : k - 1]);
  }
}

}  // namespace

void upwind_fv_kernel(std::span<const double> u, std::span<double> flux, std::span<double> out,
                      const FluxSplit& split, double ratio) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    flux[i] = split.plus(u[i]) + split.minus(u[i + 1 == n ? 0 : i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = u[i] - ratio * (flux[i] - flux[i == 0 ? n - 1 : i - 1]);
  }
}

RealField upwind_fv_step(std::span<const double> u, const FluxSplit& split, double dt, double dx,
                         OpCounts* counts) {
  const std::size_t n = u.size();
  RealField flux(n), out(n);
  upwind_fv_kernel(u, flux, out, split, dt / dx);
  require_finite(out, "upwind_fv_step");
  if (counts) {
    // per interface: f+ and f- evaluations and one add; per cell: difference,
    // scaling and subtraction
    counts->real_flux_evaluations += 2 * n;
    counts->real_mul_add += n + 3 * n;
  }
  return out;
}

RealField lax_friedrichs_step(std::span<const double> u, const ScalarLaw& law, double alpha,
                              double dt, double dx) {
  const std::size_t n = u.size();
  RealField flux(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ul = u[i];
    const double ur = u[i + 1 == n ? 0 : i + 1];
    flux[i] = 0.5 * (law.flux(ul) + law.flux(ur)) - 0.5 * alpha * (ur - ul);
  }
  const double r = dt / dx;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = u[i] - r * (flux[i] - flux[i == 0 ? n - 1 : i - 1]);
  }
  require_finite(out, "lax_friedrichs_step");
  return out;
}

RealField weno5_rk3_step(std::span<const double> u, double a, double dt, double dx) {
  const std::size_t n = u.size();
  if (n < 5) throw ConfigError("weno5_rk3_step: need at least 5 cells");
  std::vector<double> face;
  RealField rhs(n), u1(n), u2(n), out(n);
  weno5_rhs(u, a, dx, rhs, face);
  for (std::size_t i = 0; i < n; ++i) u1[i] = u[i] + dt * rhs[i];
  weno5_rhs(u1, a, dx, rhs, face);
  for (std::size_t i = 0; i < n; ++i) u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * rhs[i]);
  weno5_rhs(u2, a, dx, rhs, face);
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * rhs[i]);
  require_finite(out, "weno5_rk3_step");
  return out;
}

}  // namespace fqnm
