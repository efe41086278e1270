#include "fqnm/equivalence.hpp"

#include <algorithm>
#include <sstream>

#include "fqnm/errors.hpp"

namespace fqnm {

TwoPointFlux godunov_flux(const ScalarLaw& law) {
  if (law.kind == ScalarLaw::Kind::Advection) {
    const double a = law.speed;
    return [a](double ul, double ur) { return a >= 0.0 ? a * ul : a * ur; };
  }
  return [law](double ul, double ur) {
    if (ul <= ur) {
      if (ul > 0.0) return law.flux(ul);
      if (ur < 0.0) return law.flux(ur);
      return 0.0;
    }
    return std::max(law.flux(ul), law.flux(ur));
  };
}

TwoPointFlux lax_friedrichs_flux(const ScalarLaw& law, double alpha) {
  return [law, alpha](double ul, double ur) {
    return 0.5 * (law.flux(ul) + law.flux(ur)) - 0.5 * alpha * (ur - ul);
  };
}

InterfaceMap::InterfaceMap(TwoPointFlux flux, SchemeParams params, std::string name)
    : flux_(std::move(flux)), params_(params), name_(std::move(name)) {}

State InterfaceMap::operator()(State ql, State qr) const {
  const double delta = params_.delta.delta();
  const double f = flux_(delta * static_cast<double>(ql), delta * static_cast<double>(qr));
  return round_to_int(f * params_.ratio() / delta);
}

InterfaceMap quantised_two_point_flux(TwoPointFlux flux, const SchemeParams& params,
                                      std::string name) {
  return InterfaceMap(std::move(flux), params, std::move(name));
}

QuantisedField step(const QuantisedField& q, const InterfaceMap& rule, InterfaceObserver* observer) {
  const std::size_t n = q.size();
  std::vector<State> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State ql = q[i];
    const State qr = q[i + 1 == n ? 0 : i + 1];
    flux[i] = rule(ql, qr);
    if (observer) observer->on_interface(i, ql, qr, flux[i]);
  }
  std::vector<State> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    State diff, next;
    if (__builtin_sub_overflow(flux[i], flux[i == 0 ? n - 1 : i - 1], &diff) ||
        __builtin_sub_overflow(q[i], diff, &next)) {
      throw NumericalError("integer overflow in two-point update at cell " + std::to_string(i));
    }
    out[i] = next;
  }
  return QuantisedField(std::move(out), q.resolution());
}

std::string EquivalenceReport::describe() const {
  std::ostringstream os;
  os << (identical ? "identical" : "diverged") << " after " << steps_run << " steps, "
     << visited.size() << " visited pairs";
  if (divergence_step) {
    os << "; first differing state at step " << *divergence_step << " cell " << *divergence_cell;
  }
  if (witness) {
    os << "; witness interface " << witness->interface_index << " at step " << witness->step
       << " (qL,qR)=(" << witness->pair.first << "," << witness->pair.second << ") Phi1="
       << witness->phi_first << " Phi2=" << witness->phi_second;
  }
  if (first_disagreement && !witness) {
    os << "; tables disagree at (" << first_disagreement->pair.first << ","
       << first_disagreement->pair.second << ") without changing the trajectory";
  }
  return os.str();
}

EquivalenceReport trajectories_identical(const InterfaceMap& first, const InterfaceMap& second,
                                         const QuantisedField& q0, std::size_t steps) {
  EquivalenceReport report;
  QuantisedField a = q0;
  QuantisedField b = q0;
  const std::size_t n = q0.size();
  std::vector<State> fa(n), fb(n);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<TableDisagreement> this_step;
    for (std::size_t i = 0; i < n; ++i) {
      const State ql = a[i];
      const State qr = a[i + 1 == n ? 0 : i + 1];
      report.visited.emplace(ql, qr);
      fa[i] = first(ql, qr);
      fb[i] = second(ql, qr);
      if (fa[i] != fb[i]) {
        this_step.push_back({s, i, {ql, qr}, fa[i], fb[i]});
        if (!report.first_disagreement) report.first_disagreement = this_step.back();
      }
    }
    a = step(a, first);
    b = step(b, second);
    report.steps_run = s + 1;
    if (a == b) continue;

    report.identical = false;
    report.divergence_step = s + 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != b[i]) {
        report.divergence_cell = i;
        break;
      }
    }
    // A differing cell i changes through its faces i-1/2 and i+1/2.
    const std::size_t cell = *report.divergence_cell;
    const std::size_t left_face = cell == 0 ? n - 1 : cell - 1;
    for (const auto& d : this_step) {
      if (d.interface_index == cell || d.interface_index == left_face) {
        report.witness = d;
        break;
      }
    }
    break;
  }
  return report;
}

}  // namespace fqnm
