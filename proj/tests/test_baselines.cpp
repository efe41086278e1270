#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "fqnm/baselines.hpp"
#include "fqnm/errors.hpp"
#include "support.hpp"

using namespace fqnm;
using fqnm::testing::burgers_setup;
using fqnm::testing::random_states;

namespace {

std::vector<double> sine(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    u[i] = std::sin(2 * std::numbers::pi * x);
  }
  return u;
}

// Cell averages of sin(2 pi (x - shift)).
std::vector<double> sine_averages(std::size_t n, double shift) {
  const double dx = 1.0 / static_cast<double>(n), k = 2 * std::numbers::pi;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) * dx - shift;
    u[i] = (std::cos(k * a) - std::cos(k * (a + dx))) / (k * dx);
  }
  return u;
}

}  // namespace

TEST_CASE("upwind finite volume conserves the sum") {
  const auto s = burgers_setup(0.01, -200, 200, 0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> u(100);
  for (auto& v : u) v = d(rng);
  const double mass = std::accumulate(u.begin(), u.end(), 0.0);
  for (int n = 0; n < 50; ++n) u = upwind_fv_step(u, s.split, s.params.dt, s.params.dx);
  CHECK(std::accumulate(u.begin(), u.end(), 0.0) == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("upwind at nu = 1 is the exact shift and counts real work") {
  const FluxSplit s(ScalarLaw::advection(1.0), 1.0);
  const std::vector<double> u{1.0, 2.0, 3.0, 4.0};
  OpCounts ops;
  const auto v = upwind_fv_step(u, s, 0.5, 0.5, &ops);
  CHECK(v == std::vector<double>{4.0, 1.0, 2.0, 3.0});
  CHECK(ops.real_flux_evaluations >= u.size());
}

TEST_CASE("one quantised step stays within 2 delta of the real step") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const double delta = 0.01;
    const auto s = burgers_setup(delta, -150, 150, 0.5, 1.1);
    const QuantisedField q(random_states(rng, 40, -150, 150), Resolution(delta));
    const auto u = reconstruct(q).values;
    const auto real = upwind_fv_step(u, s.split, s.params.dt, s.params.dx);
    const auto next = step(q, s.maps);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double dq = delta * static_cast<double>(next.states()[i] - q.states()[i]);
      REQUIRE(std::fabs(dq - (real[i] - u[i])) <= 2 * delta + 1e-12);
    }
  }
}

TEST_CASE("lax-friedrichs keeps constants and the sum") {
  const std::vector<double> c(16, 0.7);
  CHECK(lax_friedrichs_step(c, ScalarLaw::burgers(), 1.0, 0.01, 0.02) == c);
  const auto u = sine(64);
  const auto v = lax_friedrichs_step(u, ScalarLaw::burgers(), 1.1, 0.5 / 64 / 1.1, 1.0 / 64);
  CHECK(std::fabs(std::accumulate(v.begin(), v.end(), 0.0)) < 1e-12);
}

TEST_CASE("weno5 reaches high order on a smooth wave") {
  // dt proportional to dx^(5/3) keeps the RK3 error below the spatial one
  std::vector<double> errors;
  for (const std::size_t n : {32u, 64u, 128u}) {
    const double dx = 1.0 / static_cast<double>(n);
    const double dt_target = 0.5 * dx * std::pow(dx * 32.0, 2.0 / 3.0);
    const double t_final = 0.25;
    const auto steps = static_cast<int>(std::ceil(t_final / dt_target));
    const double dt = t_final / steps;
    auto u = sine_averages(n, 0.0);
    for (int s = 0; s < steps; ++s) u = weno5_rk3_step(u, 1.0, dt, dx);
    const auto exact = sine_averages(n, t_final);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += std::fabs(u[i] - exact[i]) * dx;
    errors.push_back(err);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double order = std::log2(errors[k - 1] / errors[k]);
    CHECK(order >= 4.0);
  }
}

TEST_CASE("non-finite values are reported") {
  const FluxSplit s(ScalarLaw::burgers(), 2.0);
  std::vector<double> u(8, 0.5);
  u[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(upwind_fv_step(u, s, 0.01, 0.1), NumericalError);
  CHECK_THROWS_AS(weno5_rk3_step(u, 1.0, 0.01, 0.1), NumericalError);
}
