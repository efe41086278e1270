#include "fqnm/scalar_problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fqnm/baselines.hpp"
#include "fqnm/diagnostics.hpp"
#include "fqnm/errors.hpp"

namespace fqnm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCflSlack = 1e-12;
}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::FQNM: return "fqnm";
    case Scheme::UpwindFV: return "upwind";
    case Scheme::LaxFriedrichs: return "lf";
    case Scheme::WENO5RK3: return "weno5";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "fqnm") return Scheme::FQNM;
  if (s == "upwind" || s == "upwindfv" || s == "fd") return Scheme::UpwindFV;
  if (s == "lf" || s == "laxfriedrichs") return Scheme::LaxFriedrichs;
  if (s == "weno5" || s == "weno5rk3") return Scheme::WENO5RK3;
  throw ConfigError("unknown scheme '" + name + "' (expected fqnm, upwind, lf, weno5)");
}

std::vector<double> ScalarProblem::cell_centres() const {
  std::vector<double> x(n_cells);
  const double h = dx();
  for (std::size_t i = 0; i < n_cells; ++i) x[i] = (static_cast<double>(i) + 0.5) * h;
  return x;
}

std::vector<double> ScalarProblem::initial_values() const {
  auto x = cell_centres();
  for (double& xi : x) xi = initial.profile(xi);
  return x;
}

void validate(const ScalarProblem& problem) {
  if (problem.n_cells < 8) throw ConfigError("scalar problem needs at least 8 cells");
  if (!(problem.final_time > 0.0)) throw ConfigError("final time must be positive");
  if (!problem.initial.profile) throw ConfigError("scalar problem has no initial condition");
}

double GaussianPacket::operator()(double x) const {
  const double d = x - center;
  return amplitude * std::exp(-d * d / (2.0 * sigma * sigma)) * std::sin(kTwoPi * frequency * x);
}

double GaussianPacket::normalised_frequency(std::size_t n_cells) const {
  return kTwoPi * frequency / static_cast<double>(n_cells);
}

PacketSample gaussian_packet_ic(std::size_t n_cells, const GaussianPacket& packet) {
  if (!(packet.sigma > 0.0 && packet.sigma < 0.5)) {
    throw ConfigError("gaussian packet needs 0 < sigma < 0.5");
  }
  if (!(packet.frequency >= 1.0)) throw ConfigError("gaussian packet needs frequency >= 1");
  ScalarProblem p{ScalarLaw::advection(1.0), n_cells, packet_initial_condition(packet), 1.0};
  const double k0dx = packet.normalised_frequency(n_cells);
  return {p.initial_values(), k0dx, k0dx > std::numbers::pi};
}

std::vector<double> burgers_ic(std::size_t n_cells) {
  ScalarProblem p{ScalarLaw::burgers(), n_cells, burgers_initial_condition(), 1.0};
  return p.initial_values();
}

InitialCondition burgers_initial_condition() {
  return {"0.5+sin(2pi x)", [](double x) { return 0.5 + std::sin(kTwoPi * x); }};
}

InitialCondition packet_initial_condition(const GaussianPacket& packet) {
  std::ostringstream os;
  os << "gaussian_packet(f=" << packet.frequency << ",sigma=" << packet.sigma
     << ",center=" << packet.center << ")";
  return {os.str(), packet};
}

SchemeParams resolve_params(const ScalarProblem& problem, const RunConfig& config) {
  validate(problem);
  if (!(config.cfl > 0.0)) throw ConfigError("cfl must be positive");
  const auto u0 = problem.initial_values();
  const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
  double alpha;
  if (config.alpha) {
    alpha = *config.alpha;
  } else if (problem.law.kind == ScalarLaw::Kind::Advection) {
    alpha = std::fabs(problem.law.speed);
  } else {
    alpha = wave_speed_bound(problem.law, {*lo, *hi}, 1.1);
  }
  if (!(alpha > 0.0)) throw ConfigError("wave-speed bound must be positive");
  double delta;
  if (config.delta) {
    delta = *config.delta;
  } else {
    const double range = *hi - *lo;
    delta = range > 0.0 ? range / 500.0 : std::max(std::fabs(*hi), 1.0) / 500.0;
  }
  const double dx = problem.dx();
  const double dt_cfl = config.cfl * dx / alpha;
  const double steps = std::ceil(problem.final_time / dt_cfl * (1.0 - 1e-14));
  const double dt = problem.final_time / steps;
  if (!config.alpha && config.pin_cfl) alpha = std::max(alpha, config.cfl * dx / dt);
  return make_params(delta, dx, dt, alpha);
}

RunRecord run(const ScalarProblem& problem, const RunConfig& config) {
  const SchemeParams params = resolve_params(problem, config);
  const CflReport cfl = cfl_check(params);
  if (cfl.nu > 1.0 + kCflSlack) {
    std::ostringstream os;
    os << "refusing to run: CFL number " << cfl.nu << " > 1";
    throw ConfigError(os.str());
  }
  if (config.scheme == Scheme::WENO5RK3 && problem.law.kind != ScalarLaw::Kind::Advection) {
    throw ConfigError("WENO5+RK3 baseline is only defined for linear advection");
  }

  RunRecord rec;
  rec.scheme = config.scheme;
  rec.params = params;
  const auto steps = static_cast<std::size_t>(std::llround(problem.final_time / params.dt));
  rec.steps = steps;
  const double delta = params.delta.delta();
  const auto u0 = problem.initial_values();
  const bool fqnm = config.scheme == Scheme::FQNM;

  auto want_snapshot = [&](std::size_t n) {
    if (n == 0 || n == steps) return true;
    return config.record_every > 0 && n % config.record_every == 0;
  };

  auto record = [&](std::size_t n, std::span<const double> values, const QuantisedField* q,
                    const LevelTransitionMatrix* transition) {
    StepDiagnostics d;
    d.step = n;
    d.time = static_cast<double>(n) * params.dt;
    double sum = 0.0;
    for (const double v : values) sum += v;
    d.mass_real = sum;
    if (q) {
      d.mass = total_mass(q->states());
      d.tv = total_variation(q->states());
      if (config.track_entropy) {
        const LevelDistribution p = level_distribution(q->states());
        d.entropy = discrete_entropy(p);
        d.effective_levels = std::exp(d.entropy);
        if (transition) d.rho_defect = bistochastic_defect(*transition);
      }
    }
    const bool snap = want_snapshot(n);
    if (snap && config.reference) {
      const auto ref = config.reference(d.time);
      d.l1_vs_ref = l1_error(values, ref, params.dx);
      d.l2rel_vs_ref = relative_l2_error(values, ref);
    }
    rec.diagnostics.push_back(d);
    if (snap) {
      Snapshot s{n, d.time, std::vector<double>(values.begin(), values.end()), {}};
      if (q) s.states.assign(q->states().begin(), q->states().end());
      rec.snapshots.push_back(std::move(s));
    }
  };

  if (fqnm) {
    const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
    const FluxSplit split = lax_friedrichs_split(problem.law, params.alpha, {*lo, *hi});
    QuantisedField q = quantise(u0, params.delta);
    const auto [qlo, qhi] = std::minmax_element(q.states().begin(), q.states().end());
    const State margin = 2 + (*qhi - *qlo) / 8;
    const TransferMaps maps = build_transfer_maps(split, params, StateRange{*qlo - margin, *qhi + margin});
    VisitedPairs visited;
    StepHooks hooks{config.track_visited ? &visited : nullptr, &rec.ops};

    auto values_of = [&](const QuantisedField& f) { return reconstruct(f).values; };
    record(0, values_of(q), &q, nullptr);
    const State mass0 = total_mass(q.states());
    for (std::size_t n = 1; n <= steps; ++n) {
      QuantisedField next = step(q, maps, hooks);
      const State mass = total_mass(next.states());
      if (mass != mass0) {
        std::ostringstream os;
        os << "FQNM mass changed at step " << n << ": " << mass0 << " -> " << mass;
        throw CheckFailure(os.str());
      }
      if (auto v = check_monotone_step(q.states(), next.states())) {
        std::ostringstream os;
        os << "step " << n << ": " << *v;
        if (config.strict_monotone) throw CheckFailure(os.str());
        rec.violations.push_back(os.str());
      }
      if (config.track_entropy) {
        const auto m = level_transition_matrix(q.states(), next.states());
        record(n, values_of(next), &next, &m);
      } else {
        record(n, values_of(next), &next, nullptr);
      }
      q = std::move(next);
    }
    rec.visited = visited.pairs();
    (void)delta;
    return rec;
  }

  RealField u = u0;
  record(0, u, nullptr, nullptr);
  const FluxSplit split(problem.law, params.alpha);
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      switch (config.scheme) {
        case Scheme::UpwindFV: u = upwind_fv_step(u, split, params.dt, params.dx, &rec.ops); break;
        case Scheme::LaxFriedrichs:
          u = lax_friedrichs_step(u, problem.law, params.alpha, params.dt, params.dx);
          break;
        case Scheme::WENO5RK3: u = weno5_rk3_step(u, problem.law.speed, params.dt, params.dx); break;
        case Scheme::FQNM: break;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(n) + ": " + e.what());
    }
    record(n, u, nullptr, nullptr);
  }
  return rec;
}

}  // namespace fqnm
