#include "fqnm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "fqnm/baselines.hpp"
#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

using clock_type = std::chrono::steady_clock;

struct BurgersSetup {
  SchemeParams params;
  FluxSplit split;
  std::vector<double> u0;
};

BurgersSetup burgers_setup(std::size_t n_cells, double cfl) {
  const ScalarProblem problem{ScalarLaw::burgers(), n_cells, burgers_initial_condition(), 0.35};
  RunConfig config;
  config.cfl = cfl;
  const SchemeParams params = resolve_params(problem, config);
  auto u0 = problem.initial_values();
  const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
  return {params, lax_friedrichs_split(problem.law, params.alpha, {*lo, *hi}), std::move(u0)};
}

// One scheme at one size, ready to be timed repeatedly.
class Stepper {
 public:
  Stepper(Scheme scheme, std::size_t n_cells, double cfl, const TimingOptions& opts);

  const TimingReport& report() const noexcept { return report_; }
  TimingReport& report() noexcept { return report_; }
  void warm_up(std::size_t reps) {
    for (std::size_t r = 0; r < reps; ++r) advance(report_.steps);
  }
  void sample_once() {
    const auto t0 = clock_type::now();
    advance(report_.steps);
    const std::chrono::duration<double> dt = clock_type::now() - t0;
    report_.samples.push_back(dt.count() / static_cast<double>(report_.steps));
  }
  void finish() { report_.median = median(report_.samples); }

 private:
  void advance(std::size_t steps) {
    if (report_.scheme == Scheme::FQNM) {
      for (std::size_t k = 0; k < steps; ++k) {
        step_kernel(q_, q_flux_, q_out_, *maps_);
        q_.swap(q_out_);
      }
    } else {
      for (std::size_t k = 0; k < steps; ++k) {
        upwind_fv_kernel(u_, u_flux_, u_out_, setup_.split, setup_.params.ratio());
        u_.swap(u_out_);
      }
    }
  }

  BurgersSetup setup_;
  TimingReport report_;
  std::optional<TransferMaps> maps_;
  std::vector<State> q_, q_flux_, q_out_;
  std::vector<double> u_, u_flux_, u_out_;
};

Stepper::Stepper(Scheme scheme, std::size_t n_cells, double cfl, const TimingOptions& opts)
    : setup_(burgers_setup(n_cells, cfl)) {
  if (opts.reps < 5) throw ConfigError("timing needs at least 5 repetitions");
  if (scheme != Scheme::FQNM && scheme != Scheme::UpwindFV) {
    throw ConfigError("timing is implemented for fqnm and upwind only");
  }
  report_.scheme = scheme;
  report_.n_cells = n_cells;
  report_.steps = std::max<std::size_t>(4, opts.work_per_rep / n_cells);
  report_.samples.reserve(opts.reps);
  if (scheme == Scheme::FQNM) {
    const QuantisedField q0 = quantise(setup_.u0, setup_.params.delta);
    const auto [lo, hi] = std::minmax_element(q0.states().begin(), q0.states().end());
    const State margin = 2 + (*hi - *lo) / 8;
    maps_ = build_transfer_maps(setup_.split, setup_.params, StateRange{*lo - margin, *hi + margin});
    step(q0, *maps_, StepHooks{nullptr, &report_.ops_per_step});
    q_.assign(q0.states().begin(), q0.states().end());
    q_flux_.resize(n_cells);
    q_out_.resize(n_cells);
  } else {
    upwind_fv_step(setup_.u0, setup_.split, setup_.params.dt, setup_.params.dx, &report_.ops_per_step);
    u_ = setup_.u0;
    u_flux_.resize(n_cells);
    u_out_.resize(n_cells);
  }
}

}  // namespace

double median(std::vector<double> xs) {
  if (xs.empty()) throw ConfigError("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

TimingReport time_scheme(Scheme scheme, std::size_t n_cells, double cfl, const TimingOptions& opts) {
  Stepper stepper(scheme, n_cells, cfl, opts);
  stepper.warm_up(opts.warmups);
  for (std::size_t r = 0; r < opts.reps; ++r) stepper.sample_once();
  stepper.finish();
  return stepper.report();
}

void attach_speedup(TimingReport& report, const TimingReport& baseline) {
  report.baseline = to_string(baseline.scheme);
  report.speedup = report.median > 0.0 ? baseline.median / report.median : 0.0;
}

LinearFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit needs at least two points");
  double sxy = 0.0, sxx = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    mean += y[i];
  }
  mean /= static_cast<double>(y.size());
  LinearFit fit;
  fit.slope = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.slope * x[i];
    ss_res += r * r;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

ScalingStudy scaling_ladder(std::size_t min_log2, std::size_t max_log2, double cfl,
                            const TimingOptions& opts, bool with_baseline) {
  if (min_log2 > max_log2) throw ConfigError("empty ladder");
  std::vector<Stepper> fqnm, base;
  for (std::size_t k = min_log2; k <= max_log2; ++k) {
    const std::size_t cells = std::size_t{1} << k;
    fqnm.emplace_back(Scheme::FQNM, cells, cfl, opts);
    if (with_baseline) base.emplace_back(Scheme::UpwindFV, cells, cfl, opts);
  }
  for (auto& s : fqnm) s.warm_up(opts.warmups);
  for (auto& s : base) s.warm_up(opts.warmups);
  // Repetitions go round-robin over sizes and schemes so that slow drift in
  // machine speed lands on every point of the ladder alike.
  for (std::size_t r = 0; r < opts.reps; ++r) {
    for (std::size_t k = 0; k < fqnm.size(); ++k) {
      fqnm[k].sample_once();
      if (with_baseline) base[k].sample_once();
    }
  }

  ScalingStudy study;
  std::vector<double> n, t_fqnm, t_base;
  for (std::size_t k = 0; k < fqnm.size(); ++k) {
    fqnm[k].finish();
    study.fqnm.push_back(fqnm[k].report());
    n.push_back(static_cast<double>(fqnm[k].report().n_cells));
    t_fqnm.push_back(fqnm[k].report().median);
    if (with_baseline) {
      base[k].finish();
      study.baseline.push_back(base[k].report());
      attach_speedup(study.fqnm.back(), study.baseline.back());
      t_base.push_back(study.baseline.back().median);
    }
  }
  study.fqnm_fit = fit_through_origin(n, t_fqnm);
  if (with_baseline) study.baseline_fit = fit_through_origin(n, t_base);
  return study;
}

}  // namespace fqnm
