#pragma once

#include <span>
#include <vector>

#include "fqnm/transfer.hpp"

namespace fqnm {

using RealField = std::vector<double>;

/// First-order split-flux finite volume update on a periodic grid:
/// u'_i = u_i - dt/dx (F(u_i,u_{i+1}) - F(u_{i-1},u_i)), F(a,b) = f+(a) + f-(b).
/// Throws NumericalError on a non-finite result.
RealField upwind_fv_step(std::span<const double> u, const FluxSplit& split, double dt, double dx,
                         OpCounts* counts = nullptr);

/// Allocation-free form of upwind_fv_step; `flux` and `out` have length N.
void upwind_fv_kernel(std::span<const double> u, std::span<double> flux, std::span<double> out,
                      const FluxSplit& split, double ratio);

/// Classical Lax-Friedrichs flux F = (f(uL)+f(uR))/2 - alpha/2 (uR - uL).
RealField lax_friedrichs_step(std::span<const double> u, const ScalarLaw& law, double alpha,
                              double dt, double dx);

/// One SSP-RK3 step of fifth-order WENO (Jiang-Shu weights, eps = 1e-6) for
/// linear advection with speed a on a periodic grid.
RealField weno5_rk3_step(std::span<const double> u, double a, double dt, double dx);

}  // namespace fqnm
