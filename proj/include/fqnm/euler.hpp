#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fqnm/euler_state.hpp"
#include "fqnm/quantisation.hpp"

namespace fqnm {

/// Roe flux with Roe-averaged eigensystem and a Harten entropy fix
/// (eps = 0.05 (|u~| + a~)) on the two acoustic fields.
/// Throws NumericalError for non-admissible states.
EulerFlux roe_flux(const EulerConservative& left, const EulerConservative& right,
                   const IdealGas& gas = {});

/// Physical flux f(U).
EulerFlux euler_flux(const EulerConservative& u, const IdealGas& gas = {});

/// max(|u| + a) * dt / dx over the cells.
double euler_cfl(std::span<const EulerConservative> states, double dt, double dx,
                 const IdealGas& gas = {});

/// U'_i = U_i - dt/dx (F_{i+1/2} - F_{i-1/2}) with zero-gradient ghost cells.
/// Throws NumericalError with the cell index when a state leaves the
/// admissible set.
std::vector<EulerConservative> fp_roe_step(std::span<const EulerConservative> states, double dt,
                                           double dx, const IdealGas& gas = {});

/// Density carried as integer quanta, momentum and energy as reals.
struct HybridState {
  std::vector<State> q_rho;
  Resolution delta_rho;
  std::vector<double> m;
  std::vector<double> E;

  std::size_t size() const noexcept { return q_rho.size(); }
  EulerConservative cell(std::size_t i) const;
  std::vector<double> density() const;
};

HybridState quantise_density(std::span<const EulerConservative> states, Resolution delta_rho);

/// Same Roe fluxes as fp_roe_step evaluated on the reconstructed state; the
/// mass flux is realised as an integer transfer round(F_rho dt/dx / delta_rho)
/// per interface, momentum and energy update in real arithmetic.
/// `mass_transfers`, when given, receives the N+1 integer face transfers.
HybridState fqnm_density_step(const HybridState& h, double dt, double dx, const IdealGas& gas = {},
                              std::vector<State>* mass_transfers = nullptr);

}  // namespace fqnm
