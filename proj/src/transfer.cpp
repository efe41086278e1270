#include "fqnm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

inline State add_checked(State a, State b, std::size_t cell) {
#if FQNM_CHECKED_ARITHMETIC
  State r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw NumericalError("integer overflow in transfer update at cell " + std::to_string(cell));
  }
  return r;
#else
  (void)cell;
  return a + b;
#endif
}

inline State sub_checked(State a, State b, std::size_t cell) {
#if FQNM_CHECKED_ARITHMETIC
  State r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw NumericalError("integer overflow in transfer update at cell " + std::to_string(cell));
  }
  return r;
#else
  (void)cell;
  return a - b;
#endif
}

}  // namespace

std::string ScalarLaw::name() const {
  if (kind == Kind::Burgers) return "burgers";
  std::ostringstream os;
  os << "advection(a=" << speed << ")";
  return os.str();
}

double wave_speed_bound(const ScalarLaw& law, StateInterval interval, double inflation) {
  // |f'| is convex for both laws, so the endpoints bound it.
  const double m = std::max(std::fabs(law.derivative(interval.lo)),
                            std::fabs(law.derivative(interval.hi)));
  return m * inflation;
}

FluxSplit lax_friedrichs_split(const ScalarLaw& law, double alpha, StateInterval working,
                               std::size_t samples) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("lax_friedrichs_split: alpha must be finite and nonnegative");
  }
  if (working.hi < working.lo || samples < 2) {
    throw ConfigError("lax_friedrichs_split: empty working interval");
  }
  FluxSplit split(law, alpha);
  const double h = (working.hi - working.lo) / static_cast<double>(samples - 1);
  double prev_plus = split.plus(working.lo);
  double prev_minus = split.minus(working.lo);
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = working.lo + h * static_cast<double>(k);
    const double slope = std::fabs(law.derivative(u));
    if (slope > alpha * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "lax_friedrichs_split: alpha=" << alpha << " < |f'(" << u << ")|=" << slope;
      throw ConfigError(os.str());
    }
    const double p = split.plus(u);
    const double m = split.minus(u);
    const double tol = 1e-12 * (1.0 + std::fabs(p) + std::fabs(m));
    if (p < prev_plus - tol || m > prev_minus + tol) {
      throw ConfigError("lax_friedrichs_split: split parts are not monotone on the working interval");
    }
    prev_plus = p;
    prev_minus = m;
  }
  return split;
}

SchemeParams make_params(double delta, double dx, double dt, double alpha) {
  if (!(dx > 0.0) || !(dt > 0.0) || !(alpha >= 0.0) || !std::isfinite(dx) || !std::isfinite(dt) ||
      !std::isfinite(alpha)) {
    throw ConfigError("scheme parameters need dx > 0, dt > 0, alpha >= 0");
  }
  return SchemeParams{Resolution(delta), dx, dt, alpha};
}

CflReport cfl_check(const SchemeParams& p) {
  const double nu = p.nu();
  return {nu, nu <= 1.0};
}

OpCounts& OpCounts::operator+=(const OpCounts& o) noexcept {
  int_add_sub += o.int_add_sub;
  map_evaluations += o.map_evaluations;
  real_flux_evaluations += o.real_flux_evaluations;
  real_mul_add += o.real_mul_add;
  return *this;
}

TransferMap::TransferMap(Direction direction, FluxSplit split, SchemeParams params)
    : direction_(direction), split_(split), params_(params) {}

State TransferMap::closed_form(State q) const {
  const double delta = params_.delta.delta();
  const double u = delta * static_cast<double>(q);
  const double part = direction_ == Direction::Plus ? split_.plus(u) : split_.minus(u);
  return round_to_int(part * params_.ratio() / delta);
}

State TransferMap::evaluate(State q, OpCounts& counts) const {
  ++counts.map_evaluations;
  if (table_) {
    const auto k = static_cast<std::uint64_t>(q - table_lo_);
    if (k < table_->size()) return (*table_)[k];
  }
  ++counts.real_flux_evaluations;
  return closed_form(q);
}

TransferMap TransferMap::tabulated(StateRange range) const {
  if (range.hi < range.lo) {
    throw ConfigError("TransferMap::tabulated: empty range");
  }
  auto table = std::make_shared<std::vector<State>>();
  table->reserve(static_cast<std::size_t>(range.hi - range.lo + 1));
  for (State q = range.lo; q <= range.hi; ++q) {
    table->push_back(closed_form(q));
  }
  TransferMap out = *this;
  out.table_ = std::move(table);
  out.table_lo_ = range.lo;
  return out;
}

std::optional<StateRange> TransferMap::table_range() const {
  if (!table_) return std::nullopt;
  return StateRange{table_lo_, table_lo_ + static_cast<State>(table_->size()) - 1};
}

std::string TransferMap::provenance() const {
  std::ostringstream os;
  os << (direction_ == Direction::Plus ? "phi+" : "phi-") << " of LF split of "
     << split_.law().name() << " alpha=" << split_.alpha() << " delta=" << params_.delta.delta()
     << " dx=" << params_.dx << " dt=" << params_.dt;
  return os.str();
}

TransferMaps build_transfer_maps(const FluxSplit& split, const SchemeParams& params,
                                 std::optional<StateRange> table_range) {
  TransferMaps maps{TransferMap(Direction::Plus, split, params),
                    TransferMap(Direction::Minus, split, params)};
  if (table_range) {
    maps.plus = maps.plus.tabulated(*table_range);
    maps.minus = maps.minus.tabulated(*table_range);
  }
  return maps;
}

void step_kernel(std::span<const State> q, std::span<State> flux, std::span<State> out,
                 const TransferMaps& maps) {
  const std::size_t n = q.size();
  // flux[i] holds F_{i+1/2}.
  const auto tp = maps.plus.table();
  const auto tm = maps.minus.table();
  const bool shared_table = !tp.empty() && !tm.empty() && maps.plus.table_lo() == maps.minus.table_lo() &&
                            tp.size() == tm.size();
  if (shared_table) {
    const State lo = maps.plus.table_lo();
    const auto size = static_cast<std::uint64_t>(tp.size());
    for (std::size_t i = 0; i < n; ++i) {
      const State ql = q[i];
      const State qr = q[i + 1 == n ? 0 : i + 1];
      const auto kl = static_cast<std::uint64_t>(ql - lo);
      const auto kr = static_cast<std::uint64_t>(qr - lo);
      const State a = kl < size ? tp[kl] : maps.plus.closed_form(ql);
      const State b = kr < size ? tm[kr] : maps.minus.closed_form(qr);
      flux[i] = add_checked(a, b, i);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      flux[i] = add_checked(maps.plus(q[i]), maps.minus(q[i + 1 == n ? 0 : i + 1]), i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const State left = flux[i == 0 ? n - 1 : i - 1];
    out[i] = sub_checked(q[i], sub_checked(flux[i], left, i), i);
  }
}

QuantisedField step(const QuantisedField& q, const TransferMaps& maps, StepHooks hooks) {
  const std::size_t n = q.size();
  std::vector<State> out(n);
  if (!hooks.observer && !hooks.counts) {
    std::vector<State> flux(n);
    step_kernel(q.states(), flux, out, maps);
    return QuantisedField(std::move(out), q.resolution());
  }
  std::vector<State> flux(n);
  OpCounts local;
  for (std::size_t i = 0; i < n; ++i) {
    const State ql = q[i];
    const State qr = q[i + 1 == n ? 0 : i + 1];
    const State a = maps.plus.evaluate(ql, local);
    const State b = maps.minus.evaluate(qr, local);
    flux[i] = add_checked(a, b, i);
    ++local.int_add_sub;
    if (hooks.observer) hooks.observer->on_interface(i, ql, qr, flux[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const State left = flux[i == 0 ? n - 1 : i - 1];
    out[i] = sub_checked(q[i], sub_checked(flux[i], left, i), i);
    local.int_add_sub += 2;
  }
  if (hooks.counts) *hooks.counts += local;
  return QuantisedField(std::move(out), q.resolution());
}

std::optional<State> find_monotonicity_defect(const TransferMaps& maps, StateRange range) {
  auto update = [&](State q) { return q - maps.plus(q) + maps.minus(q); };
  State prev = update(range.lo);
  for (State q = range.lo; q < range.hi; ++q) {
    const State next = update(q + 1);
    if (next < prev) return q;
    prev = next;
  }
  return std::nullopt;
}

}  // namespace fqnm
