#include "fqnm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "fqnm/baselines.hpp"
#include "fqnm/diagnostics.hpp"
#include "fqnm/errors.hpp"
#include "fqnm/euler.hpp"

namespace fqnm {

namespace {

constexpr double kPi = std::numbers::pi;

CsvTable make_table(std::vector<std::string> columns, const ExperimentSpec& spec) {
  CsvTable t(std::move(columns));
  t.meta("spec", serialize_inline(spec));
  t.meta("generated", iso_timestamp());
  return t;
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::optional<double> try_width(std::span<const double> u, std::size_t centre, double left, double right) {
  try {
    return transition_width(u, centre, left, right);
  } catch (const CheckFailure&) {
    return std::nullopt;
  }
}

// Steepest drop inside [lo, hi] (clamped, non-periodic), as a global index.
std::size_t steepest_descent_in(std::span<const double> u, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, u.size() - 1);
  return lo + steepest_descent_cell(u.subspan(lo, hi - lo + 1), false);
}

void optional_cell(CsvTable::Row& row, const std::optional<double>& x) {
  if (x) {
    row << *x;
  } else {
    row << "";
  }
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const CommandOutput& out,
                                                 const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& [name, table] : out.tables) {
    const auto path = dir / name;
    table.write(path);
    written.push_back(path);
  }
  return written;
}

CsvTable run_record_table(const RunRecord& rec) {
  CsvTable t({"step", "mass", "tv", "S", "N_eff", "rho_defect", "l1_vs_ref", "l2rel_vs_ref", "time",
              "mass_real"});
  const bool integer = rec.scheme == Scheme::FQNM;
  for (const auto& d : rec.diagnostics) {
    auto row = t.row();
    row << static_cast<std::uint64_t>(d.step);
    if (integer) {
      row << d.mass << d.tv << d.entropy << d.effective_levels << d.rho_defect;
    } else {
      row << d.mass_real << "" << "" << "" << "";
    }
    if (d.l1_vs_ref >= 0.0) {
      row << d.l1_vs_ref << d.l2rel_vs_ref;
    } else {
      row << "" << "";
    }
    row << d.time << d.mass_real;
  }
  return t;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// --- band sweep ------------------------------------------------------------

std::vector<double> default_bands() { return {kPi / 8.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0}; }

const BandSummary& BandSweepResult::find(double band, Scheme scheme) const {
  for (const auto& s : summary) {
    if (s.scheme == scheme && std::fabs(s.band - band) < 1e-12) return s;
  }
  throw std::out_of_range("band sweep has no entry for " + to_string(scheme) + " at band " +
                          fixed(band));
}

BandSweepResult band_sweep(const ExperimentSpec& spec, std::span<const double> bands) {
  BandSweepResult result;
  struct Task {
    double band;
    std::size_t n;
    double f;
    Scheme scheme;
  };
  std::vector<Task> tasks;
  for (const double band : bands) {
    for (const std::size_t n : spec.sweep_cells) {
      const double f = std::round(band * static_cast<double>(n) / (2.0 * kPi));
      const double k0dx = 2.0 * kPi * f / static_cast<double>(n);
      if (f < 1.0 || k0dx > kPi) {
        result.notes.push_back("skipped n=" + std::to_string(n) + " band=" + fixed(band) +
                               ": no admissible integer frequency");
        continue;
      }
      for (const Scheme s : spec.schemes) tasks.push_back({band, n, f, s});
    }
  }
  result.points.resize(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t k) {
    const Task& t = tasks[k];
    const GaussianPacket packet{t.f, spec.sigma, 0.5, 1.0};
    const ScalarProblem problem{ScalarLaw::advection(spec.speed), t.n, packet_initial_condition(packet),
                                spec.t_final};
    RunConfig config;
    config.scheme = t.scheme;
    config.cfl = spec.cfl;
    config.delta = spec.delta;
    const RunRecord rec = run(problem, config);
    std::vector<double> exact;
    for (const double x : problem.cell_centres()) {
      exact.push_back(exact_advection(packet, spec.speed, spec.t_final, x));
    }
    result.points[k] = {t.band, t.n, t.f, packet.normalised_frequency(t.n), t.scheme,
                        relative_l2_error(rec.final_snapshot().values, exact)};
  });
  for (const double band : bands) {
    for (const Scheme s : spec.schemes) {
      std::vector<double> errs;
      for (const auto& p : result.points) {
        if (p.band == band && p.scheme == s) errs.push_back(p.rel_l2);
      }
      if (errs.empty()) continue;
      result.summary.push_back({band, s, median(errs), *std::min_element(errs.begin(), errs.end()),
                                *std::max_element(errs.begin(), errs.end()), errs.size()});
    }
  }
  return result;
}

// --- Burgers ---------------------------------------------------------------

BurgersComparison burgers_comparison(const ExperimentSpec& spec) {
  const ScalarProblem problem{ScalarLaw::burgers(), spec.cells, burgers_initial_condition(), spec.t_final};
  const HopfLaxBurgers hopf_lax = burgers_sine_reference(spec.hopf_lax_candidates);
  BurgersComparison out;
  out.x = problem.cell_centres();

  RunConfig config;
  config.cfl = spec.cfl;
  config.delta = spec.delta;
  config.record_every = spec.record_every;
  config.track_entropy = true;
  config.reference = [&](double t) { return hopf_lax.sample(out.x, t); };

  config.scheme = Scheme::FQNM;
  out.fqnm = run(problem, config);
  config.scheme = Scheme::UpwindFV;
  out.baseline = run(problem, config);

  out.reference = hopf_lax.sample(out.x, spec.t_final);
  const auto& uf = out.fqnm.final_snapshot().values;
  const auto& ub = out.baseline.final_snapshot().values;
  const std::size_t n = out.x.size();
  out.reference_shock_cell = steepest_descent_cell(out.reference, true);
  out.fqnm_shock_cell = steepest_descent_cell(uf, true);
  out.baseline_shock_cell = steepest_descent_cell(ub, true);
  out.left_state = out.reference[out.reference_shock_cell];
  out.right_state = out.reference[(out.reference_shock_cell + 1) % n];
  out.fqnm_width = try_width(uf, out.fqnm_shock_cell, out.left_state, out.right_state);
  out.baseline_width = try_width(ub, out.baseline_shock_cell, out.left_state, out.right_state);
  out.fqnm_l1 = l1_error(uf, out.reference, problem.dx());
  out.baseline_l1 = l1_error(ub, out.reference, problem.dx());

  const double shock_time = 1.0 / (2.0 * kPi);
  const auto& diag = out.fqnm.diagnostics;
  for (std::size_t k = 1; k < diag.size(); ++k) {
    if (diag[k].time <= shock_time || diag[k].step != diag[k - 1].step + 1) continue;
    const double dt = diag[k].time - diag[k - 1].time;
    out.post_shock.push_back({diag[k].step, diag[k].time, diag[k].entropy,
                              diag[k].entropy - diag[k - 1].entropy,
                              entropy_rate(diag[k - 1].entropy, diag[k].entropy, dt), diag[k].rho_defect});
  }
  return out;
}

// --- Sod -------------------------------------------------------------------

namespace {

SodProfiles profiles_of(std::span<const EulerConservative> states, const IdealGas& gas) {
  SodProfiles p;
  for (const auto& c : states) {
    const EulerPrimitive w = to_primitive(c, gas);
    p.rho.push_back(w.rho);
    p.u.push_back(w.u);
    p.p.push_back(w.p);
  }
  return p;
}

std::vector<EulerConservative> hybrid_cells(const HybridState& h) {
  std::vector<EulerConservative> out;
  for (std::size_t i = 0; i < h.size(); ++i) out.push_back(h.cell(i));
  return out;
}

}  // namespace

SodComparison sod_comparison(const ExperimentSpec& spec) {
  if (spec.cfl > 0.9) throw ConfigError("sod: cfl must be <= 0.9");
  const IdealGas gas;
  const std::size_t n = spec.cells;
  const double dx = 1.0 / static_cast<double>(n);
  const double T = spec.t_final;
  const ExactRiemann exact(kSodLeft, kSodRight, gas);

  SodComparison out;
  out.star_pressure = exact.star_pressure();
  out.star_velocity = exact.star_velocity();
  out.star_density_left = exact.star_density_left();
  out.star_density_right = exact.star_density_right();
  out.delta_rho = spec.delta.value_or(kSodLeft.rho / 1000.0);
  out.steps = static_cast<std::size_t>(std::ceil(T / (spec.cfl * dx / exact.max_signal_speed()) * (1.0 - 1e-14)));
  out.dt = T / static_cast<double>(out.steps);

  std::vector<EulerConservative> initial;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * dx;
    out.x.push_back(x);
    initial.push_back(to_conservative(x < 0.5 ? kSodLeft : kSodRight, gas));
  }

  std::vector<EulerConservative> roe = initial;
  HybridState hybrid = quantise_density(initial, Resolution(out.delta_rho));
  std::vector<State> faces;
  out.mass_trace.push_back(total_mass(hybrid.q_rho));
  for (std::size_t s = 1; s <= out.steps; ++s) {
    out.max_cfl = std::max(out.max_cfl, euler_cfl(roe, out.dt, dx, gas));
    out.max_cfl = std::max(out.max_cfl, euler_cfl(hybrid_cells(hybrid), out.dt, dx, gas));
    roe = fp_roe_step(roe, out.dt, dx, gas);
    hybrid = fqnm_density_step(hybrid, out.dt, dx, gas, &faces);
    const State mass = total_mass(hybrid.q_rho);
    const State boundary = faces.front() - faces.back();
    if (mass != out.mass_trace.back() + boundary) {
      throw CheckFailure("sod: integer density total " + std::to_string(mass) + " at step " +
                         std::to_string(s) + " does not match boundary transfers");
    }
    out.mass_trace.push_back(mass);
    out.boundary_flux.push_back(boundary);
  }

  out.roe = profiles_of(roe, gas);
  out.fqnm = profiles_of(hybrid_cells(hybrid), gas);
  for (const double x : out.x) {
    const EulerPrimitive w = exact.sample((x - 0.5) / T);
    out.exact.rho.push_back(w.rho);
    out.exact.u.push_back(w.u);
    out.exact.p.push_back(w.p);
  }
  out.l1_roe = l1_error(out.roe.rho, out.exact.rho, dx);
  out.l1_fqnm = l1_error(out.fqnm.rho, out.exact.rho, dx);

  const double g = gas.gamma;
  const double a_r = sound_speed(kSodRight, gas);
  const double shock_speed =
      kSodRight.u + a_r * std::sqrt((g + 1.0) / (2.0 * g) * out.star_pressure / kSodRight.p + (g - 1.0) / (2.0 * g));
  out.shock_position = 0.5 + shock_speed * T;
  const double cell = std::floor(out.shock_position / dx - 0.5);
  out.shock_cell = static_cast<std::size_t>(std::clamp(cell, 0.0, static_cast<double>(n - 2)));
  const std::size_t lo = out.shock_cell >= 8 ? out.shock_cell - 8 : 0;
  const std::size_t hi = out.shock_cell + 8;
  out.width_roe = try_width(out.roe.rho, steepest_descent_in(out.roe.rho, lo, hi), out.star_density_right,
                            kSodRight.rho);
  out.width_fqnm = try_width(out.fqnm.rho, steepest_descent_in(out.fqnm.rho, lo, hi),
                             out.star_density_right, kSodRight.rho);
  return out;
}

// --- equivalence -------------------------------------------------------------

EquivalenceStudy equivalence_study(const ExperimentSpec& spec) {
  EquivalenceStudy study;
  std::mt19937_64 rng(spec.seed);
  const double delta = spec.delta.value_or(0.1);
  const double dx = 1.0 / static_cast<double>(spec.cells);

  auto random_field = [&](State lo, State hi) {
    std::uniform_int_distribution<State> dist(lo, hi);
    std::vector<State> q(spec.cells);
    for (auto& v : q) v = dist(rng);
    return QuantisedField(std::move(q), Resolution(delta));
  };
  auto judge = [&](const std::string& law, std::size_t run, EquivalenceReport report) {
    EquivalenceCase c{law, run, std::move(report), true};
    const auto& r = c.report;
    c.consistent = r.identical == r.tables_agree_on_visited() &&
                   (r.identical || (r.witness && r.witness->phi_first != r.witness->phi_second &&
                                    r.visited.count(r.witness->pair) == 1));
    if (!c.consistent) ++study.inconsistent;
    study.cases.push_back(std::move(c));
    return study.cases.back().report.identical;
  };

  const ScalarLaw advection = ScalarLaw::advection(spec.speed);
  const double a = std::fabs(spec.speed);
  const SchemeParams adv_params = make_params(delta, dx, spec.cfl * dx / a, a);
  const InterfaceMap adv_godunov = quantised_two_point_flux(godunov_flux(advection), adv_params, "godunov");
  const InterfaceMap adv_lf =
      quantised_two_point_flux(lax_friedrichs_flux(advection, a), adv_params, "lax-friedrichs");
  for (std::size_t r = 0; r < spec.runs; ++r) {
    ++study.advection_runs;
    if (judge("advection", r, trajectories_identical(adv_godunov, adv_lf, random_field(-20, 20), spec.steps))) {
      ++study.advection_identical;
    }
  }

  // Burgers: a spread of state ranges, from near-constant (where the two
  // tables tend to agree) to wide signed data (where they mostly do not).
  const ScalarLaw burgers = ScalarLaw::burgers();
  const std::vector<std::pair<State, State>> ranges = {{0, 0},   {0, 1},  {-1, 1},   {0, 3},
                                                       {-3, 3},  {5, 15}, {-20, 20}, {0, 2}};
  for (std::size_t r = 0; r < spec.runs; ++r) {
    const auto [lo, hi] = ranges[r % ranges.size()];
    const double alpha = std::max(1.1 * delta * static_cast<double>(std::max(std::abs(lo), std::abs(hi))), delta);
    const SchemeParams p = make_params(delta, dx, spec.cfl * dx / alpha, alpha);
    const InterfaceMap g = quantised_two_point_flux(godunov_flux(burgers), p, "godunov");
    const InterfaceMap l = quantised_two_point_flux(lax_friedrichs_flux(burgers, alpha), p, "lax-friedrichs");
    ++study.burgers_runs;
    if (judge("burgers", r, trajectories_identical(g, l, random_field(lo, hi), spec.steps))) {
      ++study.burgers_identical;
    }
  }

  const double alpha = 1.1 * delta * 10.0;
  const SchemeParams p = make_params(delta, dx, spec.cfl * dx / alpha, alpha);
  const InterfaceMap g = quantised_two_point_flux(godunov_flux(burgers), p, "godunov");
  const InterfaceMap l = quantised_two_point_flux(lax_friedrichs_flux(burgers, alpha), p, "lax-friedrichs");
  for (State ql = -10; ql <= 10; ++ql) {
    for (State qr = -10; qr <= 10; ++qr) {
      ++study.table_pairs;
      if (g(ql, qr) == l(ql, qr)) ++study.table_agreements;
    }
  }
  return study;
}

// --- commands ----------------------------------------------------------------

CommandOutput cmd_advect(const ExperimentSpec& spec) {
  validate(spec);
  const GaussianPacket packet{spec.frequency, spec.sigma, 0.5, 1.0};
  const ScalarProblem problem{ScalarLaw::advection(spec.speed), spec.cells, packet_initial_condition(packet),
                              spec.t_final};
  const auto x = problem.cell_centres();
  auto exact_at = [&](double t) {
    std::vector<double> e;
    for (const double xi : x) e.push_back(exact_advection(packet, spec.speed, t, xi));
    return e;
  };

  CommandOutput out;
  const PacketSample ic = gaussian_packet_ic(spec.cells, packet);
  if (ic.beyond_nyquist) {
    out.summary.push_back("warning: k0 dx = " + fixed(ic.k0_dx) + " exceeds pi");
  }
  std::vector<RunRecord> records(spec.schemes.size());
  parallel_for(spec.schemes.size(), spec.threads, [&](std::size_t k) {
    RunConfig config;
    config.scheme = spec.schemes[k];
    config.cfl = spec.cfl;
    config.delta = spec.delta;
    config.record_every = spec.record_every;
    config.track_entropy = config.scheme == Scheme::FQNM;
    config.reference = exact_at;
    records[k] = run(problem, config);
  });

  std::vector<std::string> cols = {"x", "exact"};
  for (const Scheme s : spec.schemes) cols.push_back(to_string(s));
  CsvTable profiles = make_table(cols, spec);
  profiles.meta("k0_dx", format_number(ic.k0_dx));
  const auto exact = exact_at(spec.t_final);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto row = profiles.row();
    row << x[i] << exact[i];
    for (const auto& r : records) row << r.final_snapshot().values[i];
  }
  out.tables.emplace_back("advect_profiles.csv", std::move(profiles));
  for (std::size_t k = 0; k < records.size(); ++k) {
    CsvTable t = run_record_table(records[k]);
    t.meta("spec", serialize_inline(spec));
    t.meta("scheme", to_string(spec.schemes[k]));
    out.tables.emplace_back("advect_" + to_string(spec.schemes[k]) + ".csv", std::move(t));
    out.summary.push_back(to_string(spec.schemes[k]) + ": nu=" + fixed(records[k].params.nu()) +
                          " steps=" + std::to_string(records[k].steps) + " rel_l2=" +
                          fixed(relative_l2_error(records[k].final_snapshot().values, exact)));
    for (const auto& v : records[k].violations) out.failures.push_back(to_string(spec.schemes[k]) + " " + v);
  }
  out.summary.push_back("k0 dx = " + fixed(ic.k0_dx));
  return out;
}

CommandOutput cmd_band_sweep(const ExperimentSpec& spec) {
  validate(spec);
  const auto bands = default_bands();
  const BandSweepResult r = band_sweep(spec, bands);
  CommandOutput out;
  CsvTable summary = make_table({"band", "scheme", "median", "min", "max", "realizations"}, spec);
  for (const auto& s : r.summary) {
    summary.row() << s.band << to_string(s.scheme) << s.median << s.min << s.max
                  << static_cast<std::uint64_t>(s.realizations);
  }
  CsvTable points = make_table({"band", "n_cells", "frequency", "k0_dx", "scheme", "rel_l2"}, spec);
  for (const auto& p : r.points) {
    points.row() << p.band << static_cast<std::uint64_t>(p.n_cells) << p.frequency << p.k0_dx
                 << to_string(p.scheme) << p.rel_l2;
  }
  for (const auto& note : r.notes) summary.meta("note", note);
  out.tables.emplace_back("band_sweep.csv", std::move(summary));
  out.tables.emplace_back("band_sweep_points.csv", std::move(points));
  for (const auto& s : r.summary) {
    out.summary.push_back("band " + fixed(s.band, 4) + " " + to_string(s.scheme) + ": median " +
                          fixed(s.median) + " [" + fixed(s.min) + ", " + fixed(s.max) + "]");
  }
  out.summary.insert(out.summary.end(), r.notes.begin(), r.notes.end());
  return out;
}

CommandOutput cmd_burgers(const ExperimentSpec& spec) {
  validate(spec);
  const BurgersComparison c = burgers_comparison(spec);
  CommandOutput out;

  CsvTable profiles = make_table({"x", "hopf_lax", "fqnm", "upwind"}, spec);
  const HopfLaxBurgers hl = burgers_sine_reference(spec.hopf_lax_candidates);
  profiles.meta("reference", hl.provenance());
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    profiles.row() << c.x[i] << c.reference[i] << c.fqnm.final_snapshot().values[i]
                   << c.baseline.final_snapshot().values[i];
  }
  out.tables.emplace_back("burgers_profiles.csv", std::move(profiles));

  CsvTable shock = make_table({"scheme", "shock_cell", "shock_x", "width", "l1_vs_ref"}, spec);
  auto shock_row = [&](const std::string& name, std::size_t cell, std::optional<double> width, double l1) {
    auto row = shock.row();
    row << name << static_cast<std::uint64_t>(cell) << (static_cast<double>(cell) + 1.0) / static_cast<double>(c.x.size());
    optional_cell(row, width);
    row << l1;
  };
  shock_row("hopf_lax", c.reference_shock_cell, std::nullopt, 0.0);
  shock_row("fqnm", c.fqnm_shock_cell, c.fqnm_width, c.fqnm_l1);
  shock_row("upwind", c.baseline_shock_cell, c.baseline_width, c.baseline_l1);
  shock.meta("jump", format_number(c.left_state) + " -> " + format_number(c.right_state));
  out.tables.emplace_back("burgers_shock.csv", std::move(shock));

  for (const RunRecord* r : {&c.fqnm, &c.baseline}) {
    CsvTable t = run_record_table(*r);
    t.meta("spec", serialize_inline(spec));
    t.meta("scheme", to_string(r->scheme));
    out.tables.emplace_back("burgers_" + to_string(r->scheme) + ".csv", std::move(t));
  }

  CsvTable entropy = make_table({"step", "time", "S", "dS", "rate", "rho_defect"}, spec);
  std::size_t increases = 0;
  std::vector<double> defects;
  for (const auto& e : c.post_shock) {
    entropy.row() << static_cast<std::uint64_t>(e.step) << e.time << e.entropy << e.delta_entropy << e.rate
                  << e.rho_defect;
    increases += e.delta_entropy >= 0.0;
    defects.push_back(e.rho_defect);
  }
  out.tables.emplace_back("burgers_entropy.csv", std::move(entropy));

  TimingOptions opts;
  opts.reps = spec.reps;
  opts.warmups = spec.warmups;
  TimingReport tb = time_scheme(Scheme::UpwindFV, spec.cells, spec.cfl, opts);
  TimingReport tf = time_scheme(Scheme::FQNM, spec.cells, spec.cfl, opts);
  attach_speedup(tf, tb);
  CsvTable timing = make_table({"scheme", "n_cells", "steps_per_rep", "rep", "seconds_per_step"}, spec);
  for (const TimingReport* t : {&tf, &tb}) {
    for (std::size_t k = 0; k < t->samples.size(); ++k) {
      timing.row() << to_string(t->scheme) << static_cast<std::uint64_t>(t->n_cells)
                   << static_cast<std::uint64_t>(t->steps) << static_cast<std::uint64_t>(k) << t->samples[k];
    }
  }
  timing.meta("speedup_fqnm_vs_upwind", format_number(tf.speedup));
  out.tables.emplace_back("burgers_timing.csv", std::move(timing));

  out.summary.push_back("nu=" + fixed(c.fqnm.params.nu()) + " dt=" + fixed(c.fqnm.params.dt) +
                        " delta=" + fixed(c.fqnm.params.delta.delta()) + " steps=" + std::to_string(c.fqnm.steps));
  out.summary.push_back("shock cell: hopf-lax " + std::to_string(c.reference_shock_cell) + ", fqnm " +
                        std::to_string(c.fqnm_shock_cell) + ", upwind " + std::to_string(c.baseline_shock_cell));
  out.summary.push_back("width (cells): fqnm " + (c.fqnm_width ? fixed(*c.fqnm_width) : "n/a") + ", upwind " +
                        (c.baseline_width ? fixed(*c.baseline_width) : "n/a"));
  out.summary.push_back("L1 vs hopf-lax: fqnm " + fixed(c.fqnm_l1) + ", upwind " + fixed(c.baseline_l1));
  out.summary.push_back("post-shock steps " + std::to_string(c.post_shock.size()) + ": dS>=0 in " +
                        std::to_string(increases) +
                        (defects.empty() ? std::string()
                                         : ", rho defect min " +
                                               fixed(*std::min_element(defects.begin(), defects.end())) +
                                               " median " + fixed(median(defects))));
  out.summary.push_back("median step time: fqnm " + fixed(tf.median) + " s, upwind " + fixed(tb.median) +
                        " s, speedup " + fixed(tf.speedup, 3) + " (informational)");
  for (const auto& v : c.fqnm.violations) out.summary.push_back("fqnm monotonicity note: " + v);
  return out;
}

CommandOutput cmd_sod(const ExperimentSpec& spec) {
  validate(spec);
  const SodComparison c = sod_comparison(spec);
  CommandOutput out;
  const std::vector<std::string> cols = {"x",     "rho_fqnm", "rho_roe", "rho_exact", "u_fqnm",
                                         "u_roe", "u_exact",  "p_fqnm",  "p_roe",     "p_exact"};
  CsvTable full = make_table(cols, spec);
  CsvTable zoom = make_table(cols, spec);
  zoom.meta("window", format_number(spec.zoom_lo) + " <= x <= " + format_number(spec.zoom_hi));
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    for (CsvTable* t : {&full, &zoom}) {
      if (t == &zoom && (c.x[i] < spec.zoom_lo || c.x[i] > spec.zoom_hi)) continue;
      t->row() << c.x[i] << c.fqnm.rho[i] << c.roe.rho[i] << c.exact.rho[i] << c.fqnm.u[i] << c.roe.u[i]
               << c.exact.u[i] << c.fqnm.p[i] << c.roe.p[i] << c.exact.p[i];
    }
  }
  out.tables.emplace_back("sod_full.csv", std::move(full));
  out.tables.emplace_back("sod_zoom.csv", std::move(zoom));

  CsvTable summary = make_table({"scheme", "l1_rho", "shock_width"}, spec);
  {
    auto row = summary.row();
    row << "roe" << c.l1_roe;
    optional_cell(row, c.width_roe);
  }
  {
    auto row = summary.row();
    row << "fqnm" << c.l1_fqnm;
    optional_cell(row, c.width_fqnm);
  }
  out.tables.emplace_back("sod_summary.csv", std::move(summary));

  CsvTable mass = make_table({"step", "mass_quanta", "boundary_transfer"}, spec);
  for (std::size_t s = 0; s < c.mass_trace.size(); ++s) {
    auto row = mass.row();
    row << static_cast<std::uint64_t>(s) << c.mass_trace[s];
    row << (s == 0 ? State{0} : c.boundary_flux[s - 1]);
  }
  out.tables.emplace_back("sod_mass.csv", std::move(mass));

  out.summary.push_back("exact star state: p*=" + fixed(c.star_pressure) + " u*=" + fixed(c.star_velocity) +
                        " rho*L=" + fixed(c.star_density_left) + " rho*R=" + fixed(c.star_density_right));
  out.summary.push_back("dt=" + fixed(c.dt) + " steps=" + std::to_string(c.steps) + " max cfl=" + fixed(c.max_cfl) +
                        " delta_rho=" + fixed(c.delta_rho));
  out.summary.push_back("L1(rho): roe " + fixed(c.l1_roe) + ", fqnm " + fixed(c.l1_fqnm));
  out.summary.push_back("shock width (cells): roe " + (c.width_roe ? fixed(*c.width_roe) : "n/a") + ", fqnm " +
                        (c.width_fqnm ? fixed(*c.width_fqnm) : "n/a"));
  const bool closed = std::all_of(c.boundary_flux.begin(), c.boundary_flux.end(), [](State f) { return f == 0; });
  out.summary.push_back(std::string("integer density total ") +
                        (closed ? "constant at " + std::to_string(c.mass_trace.front())
                                : "changed only by boundary transfers"));
  if (c.max_cfl > 1.0) out.failures.push_back("sod: CFL exceeded 1 (" + fixed(c.max_cfl) + ")");
  return out;
}

CommandOutput cmd_equivalence(const ExperimentSpec& spec) {
  validate(spec);
  const EquivalenceStudy st = equivalence_study(spec);
  CommandOutput out;
  CsvTable runs = make_table({"law", "run", "identical", "tables_agree", "visited_pairs", "divergence_step",
                              "divergence_cell", "witness_ql", "witness_qr", "phi_godunov", "phi_lf"},
                             spec);
  for (const auto& c : st.cases) {
    const auto& r = c.report;
    auto row = runs.row();
    row << c.law << static_cast<std::uint64_t>(c.run) << (r.identical ? 1 : 0) << (r.tables_agree_on_visited() ? 1 : 0)
        << static_cast<std::uint64_t>(r.visited.size());
    if (r.divergence_step) {
      row << static_cast<std::uint64_t>(*r.divergence_step) << static_cast<std::uint64_t>(*r.divergence_cell);
    } else {
      row << "" << "";
    }
    const auto& w = r.witness ? r.witness : r.first_disagreement;
    if (w) {
      row << w->pair.first << w->pair.second << w->phi_first << w->phi_second;
    } else {
      row << "" << "" << "" << "";
    }
    if (!c.consistent) out.failures.push_back(c.law + " run " + std::to_string(c.run) + ": " + r.describe());
  }
  out.tables.emplace_back("equivalence_runs.csv", std::move(runs));
  out.summary.push_back("advection: " + std::to_string(st.advection_identical) + "/" +
                        std::to_string(st.advection_runs) + " identical");
  out.summary.push_back("burgers: " + std::to_string(st.burgers_identical) + "/" + std::to_string(st.burgers_runs) +
                        " identical; every outcome matches table agreement on the visited set: " +
                        (st.inconsistent == 0 ? "yes" : "no"));
  out.summary.push_back("burgers godunov vs lf tables agree on " + std::to_string(st.table_agreements) + "/" +
                        std::to_string(st.table_pairs) + " pairs in [-10,10]^2");
  if (st.advection_identical != st.advection_runs) {
    out.failures.push_back("advection godunov and lax-friedrichs trajectories differ");
  }
  return out;
}

CommandOutput cmd_bench(const ExperimentSpec& spec) {
  validate(spec);
  TimingOptions opts;
  opts.reps = spec.reps;
  opts.warmups = spec.warmups;
  const bool baseline = std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::UpwindFV) != spec.schemes.end();
  const ScalingStudy st = scaling_ladder(spec.ladder_min_log2, spec.ladder_max_log2, spec.cfl, opts, baseline);
  CommandOutput out;
  CsvTable ladder = make_table({"scheme", "n_cells", "steps_per_rep", "median_seconds_per_step", "min", "max",
                                "ns_per_cell", "speedup_vs_upwind"},
                               spec);
  CsvTable samples = make_table({"scheme", "n_cells", "rep", "seconds_per_step"}, spec);
  CsvTable ops = make_table({"scheme", "n_cells", "int_add_sub", "map_evaluations", "real_flux_evaluations",
                             "real_mul_add"},
                            spec);
  for (const auto* group : {&st.fqnm, &st.baseline}) {
    for (const auto& t : *group) {
      const auto [mn, mx] = std::minmax_element(t.samples.begin(), t.samples.end());
      auto row = ladder.row();
      row << to_string(t.scheme) << static_cast<std::uint64_t>(t.n_cells) << static_cast<std::uint64_t>(t.steps)
          << t.median << *mn << *mx << t.median * 1e9 / static_cast<double>(t.n_cells);
      if (t.speedup > 0.0) {
        row << t.speedup;
      } else {
        row << "";
      }
      for (std::size_t k = 0; k < t.samples.size(); ++k) {
        samples.row() << to_string(t.scheme) << static_cast<std::uint64_t>(t.n_cells) << static_cast<std::uint64_t>(k)
                      << t.samples[k];
      }
      ops.row() << to_string(t.scheme) << static_cast<std::uint64_t>(t.n_cells) << t.ops_per_step.int_add_sub
                << t.ops_per_step.map_evaluations << t.ops_per_step.real_flux_evaluations
                << t.ops_per_step.real_mul_add;
    }
  }
  ladder.meta("fqnm_fit", "slope=" + format_number(st.fqnm_fit.slope) + " r2=" + format_number(st.fqnm_fit.r2));
  out.tables.emplace_back("bench_ladder.csv", std::move(ladder));
  out.tables.emplace_back("bench_samples.csv", std::move(samples));
  out.tables.emplace_back("bench_ops.csv", std::move(ops));
  out.summary.push_back("fqnm time = c N: c=" + fixed(st.fqnm_fit.slope * 1e9) + " ns/cell, R^2=" +
                        fixed(st.fqnm_fit.r2, 5));
  if (baseline) {
    out.summary.push_back("upwind time = c N: c=" + fixed(st.baseline_fit.slope * 1e9) + " ns/cell, R^2=" +
                          fixed(st.baseline_fit.r2, 5));
    out.summary.push_back("speedup at largest N: " + fixed(st.fqnm.back().speedup, 3) + " (informational)");
  }
  return out;
}

CommandOutput run_experiment(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case Experiment::Advect: return cmd_advect(spec);
    case Experiment::BandSweep: return cmd_band_sweep(spec);
    case Experiment::Burgers: return cmd_burgers(spec);
    case Experiment::Sod: return cmd_sod(spec);
    case Experiment::Equivalence: return cmd_equivalence(spec);
    case Experiment::Bench: return cmd_bench(spec);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace fqnm
