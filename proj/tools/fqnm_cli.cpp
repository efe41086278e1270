#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqnm/csv.hpp"
#include "fqnm/errors.hpp"
#include "fqnm/experiment_config.hpp"
#include "fqnm/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config;
  bool print_config = false;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> schemes;
  std::vector<std::string> sets;
};

const char* columns_help(fqnm::Experiment e) {
  using fqnm::Experiment;
  switch (e) {
    case Experiment::Advect:
      return "Writes advect_profiles.csv (x,exact,<scheme>...) and advect_<scheme>.csv\n"
             "(step,mass,tv,S,N_eff,rho_defect,l1_vs_ref,l2rel_vs_ref,time,mass_real).";
    case Experiment::BandSweep:
      return "Writes band_sweep.csv (band,scheme,median,min,max,realizations) and\n"
             "band_sweep_points.csv (band,n_cells,frequency,k0_dx,scheme,rel_l2).";
    case Experiment::Burgers:
      return "Writes burgers_profiles.csv (x,hopf_lax,fqnm,upwind), burgers_shock.csv\n"
             "(scheme,shock_cell,shock_x,width,l1_vs_ref), burgers_<scheme>.csv (run record),\n"
             "burgers_entropy.csv (step,time,S,dS,rate,rho_defect) and burgers_timing.csv\n"
             "(scheme,n_cells,steps_per_rep,rep,seconds_per_step).";
    case Experiment::Sod:
      return "Writes sod_full.csv and sod_zoom.csv (x,rho_fqnm,rho_roe,rho_exact,u_fqnm,u_roe,\n"
             "u_exact,p_fqnm,p_roe,p_exact), sod_summary.csv (scheme,l1_rho,shock_width) and\n"
             "sod_mass.csv (step,mass_quanta,boundary_transfer).";
    case Experiment::Equivalence:
      return "Writes equivalence_runs.csv (law,run,identical,tables_agree,visited_pairs,\n"
             "divergence_step,divergence_cell,witness_ql,witness_qr,phi_godunov,phi_lf).";
    case Experiment::Bench:
      return "Writes bench_ladder.csv (scheme,n_cells,steps_per_rep,median_seconds_per_step,min,max,\n"
             "ns_per_cell,speedup_vs_upwind), bench_samples.csv (scheme,n_cells,rep,seconds_per_step)\n"
             "and bench_ops.csv (scheme,n_cells,int_add_sub,map_evaluations,real_flux_evaluations,\n"
             "real_mul_add).";
  }
  return "";
}

void add_common(CLI::App* sub, CommonFlags& f) {
  auto value = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&f, key](const std::string& v) { f.overrides[key] = v; }, help);
  };
  sub->add_option("--config", f.config, "key=value config file; flags override its values");
  sub->add_flag("--print-config", f.print_config, "print the resolved configuration and exit");
  value("--cells", "cells", "number of cells");
  value("--delta", "delta", "quantisation resolution (or 'auto')");
  value("--cfl", "cfl", "CFL number alpha dt / dx");
  value("--t-final", "t_final", "final time");
  sub->add_option("--scheme", f.schemes, "schemes: fqnm, upwind, lf, weno5 (repeat or comma-separate)")
      ->delimiter(',');
  value("--out", "out", "output directory");
  value("--seed", "seed", "seed for randomised components");
  value("--record-every", "record_every", "snapshot stride in steps (0: first and last only)");
  value("--threads", "threads", "worker threads for sweeps (0: hardware)");
  sub->add_option("--set", f.sets, "any other config key as key=value");
}

int run(fqnm::Experiment e, const CommonFlags& f) {
  fqnm::ExperimentSpec spec = fqnm::default_spec(e);
  if (!f.config.empty()) {
    spec = fqnm::load_spec(f.config, spec);
    if (spec.experiment != e) {
      throw fqnm::ConfigError("config file is for '" + fqnm::to_string(spec.experiment) + "', not '" +
                              fqnm::to_string(e) + "'");
    }
  }
  std::map<std::string, std::string> kv = f.overrides;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw fqnm::ConfigError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (!f.schemes.empty()) {
    std::string joined;
    for (const auto& s : f.schemes) joined += (joined.empty() ? "" : ",") + s;
    kv["schemes"] = joined;
  }
  if (kv.count("experiment")) throw fqnm::ConfigError("the experiment is chosen by the subcommand");
  spec = fqnm::apply_overrides(kv, spec);
  fqnm::validate(spec);
  if (f.print_config) {
    std::cout << fqnm::serialize(spec);
    return 0;
  }

  const fqnm::CommandOutput out = fqnm::run_experiment(spec);
  for (const auto& line : out.summary) std::cout << line << '\n';
  for (const auto& path : fqnm::write_outputs(out, spec.out)) std::cout << "wrote " << path.string() << '\n';
  for (const auto& msg : out.failures) std::cerr << "FAILED: " << msg << '\n';
  return out.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantised transfer-rule solvers for conservation laws"};
  app.require_subcommand(1);
  const std::vector<std::pair<fqnm::Experiment, std::string>> commands = {
      {fqnm::Experiment::Advect, "advect a Gaussian wave packet and compare with the exact shift"},
      {fqnm::Experiment::BandSweep, "relative L2 error across normalised-frequency bands"},
      {fqnm::Experiment::Burgers, "Burgers shock formation against the Hopf-Lax solution"},
      {fqnm::Experiment::Sod, "Sod shock tube: Roe vs density-quantised Roe vs exact"},
      {fqnm::Experiment::Equivalence, "Godunov vs Lax-Friedrichs quantised interface rules"},
      {fqnm::Experiment::Bench, "per-step wall time over a doubling ladder of grid sizes"},
  };
  std::vector<CommonFlags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    auto* sub = app.add_subcommand(fqnm::to_string(commands[k].first), commands[k].second);
    sub->footer(columns_help(commands[k].first));
    add_common(sub, flags[k]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (subs[k]->parsed()) return run(commands[k].first, flags[k]);
    }
  } catch (const fqnm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const fqnm::CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
