#include "fqnm/euler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

void require_admissible(const EulerConservative& c, const IdealGas& gas, const char* where,
                        std::size_t cell) {
  const double internal = c.E - 0.5 * c.m * c.m / c.rho;
  if (!(c.rho > 0.0) || !(internal > 0.0) || !std::isfinite(c.E) || !std::isfinite(c.m)) {
    std::ostringstream os;
    os << where << ": inadmissible state at cell " << cell << " (rho=" << c.rho << ", m=" << c.m
       << ", E=" << c.E << ", gamma=" << gas.gamma << ")";
    throw NumericalError(os.str());
  }
}

double harten(double lambda, double eps) {
  const double a = std::fabs(lambda);
  return a >= eps ? a : (lambda * lambda + eps * eps) / (2.0 * eps);
}

}  // namespace

EulerFlux euler_flux(const EulerConservative& u, const IdealGas& gas) {
  const EulerPrimitive w = to_primitive(u, gas);
  return {u.m, u.m * w.u + w.p, (u.E + w.p) * w.u};
}

EulerFlux roe_flux(const EulerConservative& left, const EulerConservative& right,
                   const IdealGas& gas) {
  require_admissible(left, gas, "roe_flux", 0);
  require_admissible(right, gas, "roe_flux", 1);
  const double g = gas.gamma;
  const EulerPrimitive wl = to_primitive(left, gas);
  const EulerPrimitive wr = to_primitive(right, gas);
  const double hl = (left.E + wl.p) / wl.rho;
  const double hr = (right.E + wr.p) / wr.rho;

  const double sl = std::sqrt(wl.rho);
  const double sr = std::sqrt(wr.rho);
  const double rho = sl * sr;
  const double u = (sl * wl.u + sr * wr.u) / (sl + sr);
  const double h = (sl * hl + sr * hr) / (sl + sr);
  const double a2 = (g - 1.0) * (h - 0.5 * u * u);
  if (!(a2 > 0.0)) throw NumericalError("roe_flux: non-positive Roe-averaged sound speed");
  const double a = std::sqrt(a2);

  const double d_rho = wr.rho - wl.rho;
  const double d_u = wr.u - wl.u;
  const double d_p = wr.p - wl.p;
  const double alpha1 = (d_p - rho * a * d_u) / (2.0 * a2);
  const double alpha2 = d_rho - d_p / a2;
  const double alpha3 = (d_p + rho * a * d_u) / (2.0 * a2);

  const double eps = 0.05 * (std::fabs(u) + a);
  const double l1 = harten(u - a, eps);
  const double l2 = std::fabs(u);
  const double l3 = harten(u + a, eps);

  const EulerFlux fl = euler_flux(left, gas);
  const EulerFlux fr = euler_flux(right, gas);
  const double w1 = l1 * alpha1;
  const double w2 = l2 * alpha2;
  const double w3 = l3 * alpha3;
  EulerFlux f;
  f[0] = 0.5 * (fl[0] + fr[0]) - 0.5 * (w1 + w2 + w3);
  f[1] = 0.5 * (fl[1] + fr[1]) - 0.5 * (w1 * (u - a) + w2 * u + w3 * (u + a));
  f[2] = 0.5 * (fl[2] + fr[2]) - 0.5 * (w1 * (h - u * a) + w2 * 0.5 * u * u + w3 * (h + u * a));
  return f;
}

double euler_cfl(std::span<const EulerConservative> states, double dt, double dx,
                 const IdealGas& gas) {
  double s = 0.0;
  for (const auto& c : states) {
    const EulerPrimitive w = to_primitive(c, gas);
    s = std::max(s, std::fabs(w.u) + sound_speed(w, gas));
  }
  return s * dt / dx;
}

namespace {

/// F_{i-1/2} for i = 0..n with copied ghost cells at both ends.
std::vector<EulerFlux> face_fluxes(std::span<const EulerConservative> states, const IdealGas& gas) {
  const std::size_t n = states.size();
  std::vector<EulerFlux> faces(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const auto& l = states[f == 0 ? 0 : f - 1];
    const auto& r = states[f == n ? n - 1 : f];
    faces[f] = roe_flux(l, r, gas);
  }
  return faces;
}

}  // namespace

std::vector<EulerConservative> fp_roe_step(std::span<const EulerConservative> states, double dt,
                                           double dx, const IdealGas& gas) {
  const std::size_t n = states.size();
  if (n < 2) throw ConfigError("fp_roe_step: need at least 2 cells");
  const auto faces = face_fluxes(states, gas);
  const double r = dt / dx;
  std::vector<EulerConservative> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].rho = states[i].rho - r * (faces[i + 1][0] - faces[i][0]);
    out[i].m = states[i].m - r * (faces[i + 1][1] - faces[i][1]);
    out[i].E = states[i].E - r * (faces[i + 1][2] - faces[i][2]);
    require_admissible(out[i], gas, "fp_roe_step", i);
  }
  return out;
}

EulerConservative HybridState::cell(std::size_t i) const {
  return {delta_rho.delta() * static_cast<double>(q_rho[i]), m[i], E[i]};
}

std::vector<double> HybridState::density() const {
  std::vector<double> rho(q_rho.size());
  for (std::size_t i = 0; i < q_rho.size(); ++i) {
    rho[i] = delta_rho.delta() * static_cast<double>(q_rho[i]);
  }
  return rho;
}

HybridState quantise_density(std::span<const EulerConservative> states, Resolution delta_rho) {
  HybridState h{{}, delta_rho, {}, {}};
  h.q_rho.reserve(states.size());
  for (const auto& c : states) {
    h.q_rho.push_back(round_to_int(c.rho / delta_rho.delta()));
    h.m.push_back(c.m);
    h.E.push_back(c.E);
  }
  return h;
}

HybridState fqnm_density_step(const HybridState& h, double dt, double dx, const IdealGas& gas,
                              std::vector<State>* mass_transfers) {
  const std::size_t n = h.size();
  if (n < 2) throw ConfigError("fqnm_density_step: need at least 2 cells");
  std::vector<EulerConservative> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = h.cell(i);
    require_admissible(states[i], gas, "fqnm_density_step", i);
  }
  const auto faces = face_fluxes(states, gas);
  const double r = dt / dx;
  const double delta = h.delta_rho.delta();
  std::vector<State> transfer(n + 1);
  for (std::size_t f = 0; f <= n; ++f) transfer[f] = round_to_int(faces[f][0] * r / delta);

  HybridState out{std::vector<State>(n), h.delta_rho, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    State diff, next;
    if (__builtin_sub_overflow(transfer[i + 1], transfer[i], &diff) ||
        __builtin_sub_overflow(h.q_rho[i], diff, &next)) {
      throw NumericalError("fqnm_density_step: integer overflow at cell " + std::to_string(i));
    }
    out.q_rho[i] = next;
    out.m[i] = h.m[i] - r * (faces[i + 1][1] - faces[i][1]);
    out.E[i] = h.E[i] - r * (faces[i + 1][2] - faces[i][2]);
    if (out.q_rho[i] <= 0) {
      throw NumericalError("fqnm_density_step: non-positive reconstructed density at cell " +
                           std::to_string(i));
    }
    require_admissible(out.cell(i), gas, "fqnm_density_step", i);
  }
  if (mass_transfers) *mass_transfers = std::move(transfer);
  return out;
}

}  // namespace fqnm
