#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fqnm/errors.hpp"
#include "fqnm/references.hpp"

using namespace fqnm;

namespace {

constexpr double kPi = std::numbers::pi;

// Pre-shock Burgers by characteristics: x = xi + t u0(xi), Newton on xi.
double characteristic_oracle(double x, double t) {
  auto u0 = [](double y) { return 0.5 + std::sin(2 * kPi * y); };
  auto du0 = [](double y) { return 2 * kPi * std::cos(2 * kPi * y); };
  double xi = x - t * u0(x);
  for (int k = 0; k < 100; ++k) {
    const double g = xi + t * u0(xi) - x;
    const double step = g / (1.0 + t * du0(xi));
    xi -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return u0(xi);
}

// Riemann star state by bisection on the pressure function.
struct StarOracle {
  double p, u, rho_l, rho_r;
};

double shock_or_rarefaction(double p, const EulerPrimitive& k, double g) {
  const double a = std::sqrt(g * k.p / k.rho);
  if (p > k.p) {
    const double ak = 2.0 / ((g + 1) * k.rho), bk = (g - 1) / (g + 1) * k.p;
    return (p - k.p) * std::sqrt(ak / (p + bk));
  }
  return 2 * a / (g - 1) * (std::pow(p / k.p, (g - 1) / (2 * g)) - 1);
}

double star_density(double p, const EulerPrimitive& k, double g) {
  if (p > k.p) {
    const double r = p / k.p, c = (g - 1) / (g + 1);
    return k.rho * (r + c) / (c * r + 1);
  }
  return k.rho * std::pow(p / k.p, 1 / g);
}

StarOracle bisection_star(const EulerPrimitive& l, const EulerPrimitive& r, double g) {
  double lo = 1e-12, hi = 1e5;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double f = shock_or_rarefaction(mid, l, g) + shock_or_rarefaction(mid, r, g) + (r.u - l.u);
    (f > 0 ? hi : lo) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double u = 0.5 * (l.u + r.u) + 0.5 * (shock_or_rarefaction(p, r, g) - shock_or_rarefaction(p, l, g));
  return {p, u, star_density(p, l, g), star_density(p, r, g)};
}

}  // namespace

TEST_CASE("exact advection wraps on the unit interval") {
  const Profile u0 = [](double x) { return std::sin(2 * kPi * x); };
  CHECK(exact_advection(u0, 0.3, 0.5, 0.4) == doctest::Approx(std::sin(2 * kPi * 0.25)));
  CHECK(exact_advection(u0, 0.3, 0.5, 0.05) == doctest::Approx(std::sin(2 * kPi * 0.9)));
  CHECK(exact_advection(u0, -1.0, 3.0, 0.37) == doctest::Approx(u0(0.37)).epsilon(1e-12));
}

TEST_CASE("hopf-lax agrees with characteristics before the shock") {
  const auto ref = burgers_sine_reference(65536);
  const double t = 0.1;  // shock forms at 1 / (2 pi)
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = (i + 0.5) / 200.0;
    worst = std::max(worst, std::fabs(ref.evaluate(x, t) - characteristic_oracle(x, t)));
  }
  CHECK(worst < 10 * ref.candidate_spacing(t) / t);
  CHECK(worst < 1e-3);
}

TEST_CASE("doubling the hopf-lax candidates moves samples by at most the old spacing bound") {
  const auto coarse = burgers_sine_reference(2048), fine = burgers_sine_reference(4096);
  for (const double t : {0.1, 0.35}) {
    const double bound = coarse.candidate_spacing(t) / t;
    for (int i = 0; i < 128; ++i) {
      const double x = (i + 0.5) / 128.0;
      CHECK(std::fabs(coarse.evaluate(x, t) - fine.evaluate(x, t)) <= bound);
    }
  }
}

TEST_CASE("hopf-lax preserves the mean after the shock") {
  const auto ref = burgers_sine_reference(8192);
  std::vector<double> x(2048);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (static_cast<double>(i) + 0.5) / 2048.0;
  const auto u = ref.sample(x, 0.35);
  double mean = 0.0;
  for (const double v : u) mean += v / 2048.0;
  CHECK(mean == doctest::Approx(0.5).epsilon(2e-3));
  for (const double v : u) {
    CHECK(v <= 1.5 + 1e-9);
    CHECK(v >= -0.5 - 1e-9);
  }
  CHECK(ref.provenance().find("8192") != std::string::npos);
}

TEST_CASE("exact riemann solver matches a bisection oracle") {
  const IdealGas gas{1.4};
  const std::vector<std::pair<EulerPrimitive, EulerPrimitive>> cases = {
      {{1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}},
      {{1.0, -2.0, 0.4}, {1.0, 2.0, 0.4}},
      {{1.0, 0.0, 1000.0}, {1.0, 0.0, 0.01}},
      {{5.99924, 19.5975, 460.894}, {5.99242, -6.19633, 46.0950}},
  };
  for (const auto& [l, r] : cases) {
    const ExactRiemann rs(l, r, gas);
    const auto oracle = bisection_star(l, r, gas.gamma);
    CHECK(rs.star_pressure() == doctest::Approx(oracle.p).epsilon(1e-9));
    CHECK(rs.star_velocity() == doctest::Approx(oracle.u).epsilon(1e-8));
    CHECK(rs.star_density_left() == doctest::Approx(oracle.rho_l).epsilon(1e-9));
    CHECK(rs.star_density_right() == doctest::Approx(oracle.rho_r).epsilon(1e-9));
  }
}

TEST_CASE("sod star state and wave fan") {
  const ExactRiemann rs({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  CHECK(rs.star_pressure() == doctest::Approx(0.30313).epsilon(1e-4));
  CHECK(rs.star_velocity() == doctest::Approx(0.92745).epsilon(1e-4));
  CHECK(rs.star_density_left() == doctest::Approx(0.42632).epsilon(1e-4));
  CHECK(rs.star_density_right() == doctest::Approx(0.26557).epsilon(1e-4));
  CHECK(rs.sample(-5.0).rho == 1.0);
  CHECK(rs.sample(5.0).rho == 0.125);
  CHECK(rs.sample(rs.star_velocity() - 1e-9).rho == doctest::Approx(rs.star_density_left()));
  CHECK(rs.sample(rs.star_velocity() + 1e-9).rho == doctest::Approx(rs.star_density_right()));
  // shock speed 1.7522 bounds the fan on the right
  CHECK(rs.sample(1.75).p == doctest::Approx(rs.star_pressure()));
  CHECK(rs.sample(1.76).p == 0.1);
  CHECK(rs.max_signal_speed() >= 1.75);
  CHECK(exact_sod(0.5 + 0.2 * 1.0, 0.2, {1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}).rho ==
        doctest::Approx(rs.sample(1.0).rho));
}

TEST_CASE("vacuum generation is reported") {
  CHECK_THROWS_AS(ExactRiemann({1.0, -5.0, 0.4}, {1.0, 5.0, 0.4}), NumericalError);
}
