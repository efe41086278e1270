#include "fqnm/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fqnm/csv.hpp"
#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("config: " + key + " expects a nonnegative integer, got '" + v + "'");
  }
  return x;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> fields(const ExperimentSpec& s) {
  auto num = [](double x) { return format_number(x); };
  auto uint = [](std::uint64_t x) { return format_number(x); };
  return {
      {"experiment", to_string(s.experiment)},
      {"schemes", join(s.schemes, [](Scheme x) { return to_string(x); })},
      {"cells", uint(s.cells)},
      {"delta", s.delta ? num(*s.delta) : "auto"},
      {"cfl", num(s.cfl)},
      {"t_final", num(s.t_final)},
      {"out", s.out},
      {"seed", uint(s.seed)},
      {"record_every", uint(s.record_every)},
      {"speed", num(s.speed)},
      {"frequency", num(s.frequency)},
      {"sigma", num(s.sigma)},
      {"sweep_cells", join(s.sweep_cells, [&](std::size_t x) { return uint(x); })},
      {"hopf_lax_candidates", uint(s.hopf_lax_candidates)},
      {"zoom_lo", num(s.zoom_lo)},
      {"zoom_hi", num(s.zoom_hi)},
      {"runs", uint(s.runs)},
      {"steps", uint(s.steps)},
      {"reps", uint(s.reps)},
      {"warmups", uint(s.warmups)},
      {"ladder_min_log2", uint(s.ladder_min_log2)},
      {"ladder_max_log2", uint(s.ladder_max_log2)},
      {"threads", uint(s.threads)},
  };
}

void assign(ExperimentSpec& s, const std::string& key, const std::string& v) {
  if (key == "experiment") {
    s.experiment = parse_experiment(v);
  } else if (key == "schemes") {
    s.schemes.clear();
    for (const auto& x : split_list(v)) s.schemes.push_back(parse_scheme(x));
  } else if (key == "cells") {
    s.cells = parse_uint(key, v);
  } else if (key == "delta") {
    if (v == "auto") {
      s.delta.reset();
    } else {
      s.delta = parse_double(key, v);
    }
  } else if (key == "cfl") {
    s.cfl = parse_double(key, v);
  } else if (key == "t_final") {
    s.t_final = parse_double(key, v);
  } else if (key == "out") {
    s.out = v;
  } else if (key == "seed") {
    s.seed = parse_uint(key, v);
  } else if (key == "record_every") {
    s.record_every = parse_uint(key, v);
  } else if (key == "speed") {
    s.speed = parse_double(key, v);
  } else if (key == "frequency") {
    s.frequency = parse_double(key, v);
  } else if (key == "sigma") {
    s.sigma = parse_double(key, v);
  } else if (key == "sweep_cells") {
    s.sweep_cells.clear();
    for (const auto& x : split_list(v)) s.sweep_cells.push_back(parse_uint(key, x));
  } else if (key == "hopf_lax_candidates") {
    s.hopf_lax_candidates = parse_uint(key, v);
  } else if (key == "zoom_lo") {
    s.zoom_lo = parse_double(key, v);
  } else if (key == "zoom_hi") {
    s.zoom_hi = parse_double(key, v);
  } else if (key == "runs") {
    s.runs = parse_uint(key, v);
  } else if (key == "steps") {
    s.steps = parse_uint(key, v);
  } else if (key == "reps") {
    s.reps = parse_uint(key, v);
  } else if (key == "warmups") {
    s.warmups = parse_uint(key, v);
  } else if (key == "ladder_min_log2") {
    s.ladder_min_log2 = parse_uint(key, v);
  } else if (key == "ladder_max_log2") {
    s.ladder_max_log2 = parse_uint(key, v);
  } else if (key == "threads") {
    s.threads = parse_uint(key, v);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Advect: return "advect";
    case Experiment::BandSweep: return "band-sweep";
    case Experiment::Burgers: return "burgers";
    case Experiment::Sod: return "sod";
    case Experiment::Equivalence: return "equivalence";
    case Experiment::Bench: return "bench";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto e : {Experiment::Advect, Experiment::BandSweep, Experiment::Burgers, Experiment::Sod,
                       Experiment::Equivalence, Experiment::Bench}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentSpec default_spec(Experiment e) {
  ExperimentSpec s;
  s.experiment = e;
  switch (e) {
    case Experiment::Advect:
      s.schemes = {Scheme::FQNM, Scheme::UpwindFV, Scheme::WENO5RK3};
      s.cells = 256;
      s.cfl = 1.0;
      s.t_final = 1.0;
      break;
    case Experiment::BandSweep:
      s.schemes = {Scheme::FQNM, Scheme::WENO5RK3};
      s.sweep_cells = {128, 256, 512};
      s.cfl = 1.0;
      s.t_final = 1.0;
      break;
    case Experiment::Burgers:
      s.schemes = {Scheme::FQNM, Scheme::UpwindFV};
      s.cells = 128;
      s.cfl = 0.5;
      s.t_final = 0.35;
      s.record_every = 1;
      break;
    case Experiment::Sod:
      s.schemes = {Scheme::FQNM};
      s.cells = 400;
      s.cfl = 0.8;
      s.t_final = 0.2;
      break;
    case Experiment::Equivalence:
      s.schemes = {Scheme::FQNM};
      s.cells = 32;
      s.cfl = 0.6;
      s.delta = 0.1;
      s.t_final = 1.0;
      break;
    case Experiment::Bench:
      s.schemes = {Scheme::FQNM, Scheme::UpwindFV};
      s.cells = 4096;
      s.cfl = 0.5;
      s.t_final = 0.35;
      break;
  }
  return s;
}

std::string serialize(const ExperimentSpec& spec) {
  std::string out;
  for (const auto& [k, v] : fields(spec)) out += k + "=" + v + "\n";
  return out;
}

std::string serialize_inline(const ExperimentSpec& spec) {
  std::string out;
  for (const auto& [k, v] : fields(spec)) {
    if (!out.empty()) out += ' ';
    out += k + "=" + (v.find(' ') == std::string::npos ? v : "\"" + v + "\"");
  }
  return out;
}

ExperimentSpec parse_spec(const std::string& text, ExperimentSpec base) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::string> kv;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return apply_overrides(kv, std::move(base));
}

ExperimentSpec apply_overrides(const std::map<std::string, std::string>& kv, ExperimentSpec base) {
  for (const auto& [k, v] : kv) assign(base, k, v);
  return base;
}

ExperimentSpec load_spec(const std::string& path, ExperimentSpec base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_spec(ss.str(), std::move(base));
}

void validate(const ExperimentSpec& s) {
  if (s.schemes.empty()) throw ConfigError("at least one scheme is required");
  if (s.cells < 8 && s.experiment != Experiment::BandSweep) throw ConfigError("cells must be >= 8");
  if (s.delta && !(*s.delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(s.cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (!(s.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(s.sigma > 0.0 && s.sigma < 0.5)) throw ConfigError("sigma must lie in (0, 0.5)");
  if (s.frequency < 1.0) throw ConfigError("frequency must be >= 1");
  if (!(s.zoom_lo < s.zoom_hi)) throw ConfigError("zoom_lo must be below zoom_hi");
  if (s.hopf_lax_candidates < 2) throw ConfigError("hopf_lax_candidates must be >= 2");
  if (s.reps < 5) throw ConfigError("reps must be >= 5");
  if (s.ladder_min_log2 < 3 || s.ladder_max_log2 > 26 || s.ladder_min_log2 > s.ladder_max_log2) {
    throw ConfigError("ladder must satisfy 3 <= min <= max <= 26");
  }
  for (const auto n : s.sweep_cells) {
    if (n < 8) throw ConfigError("sweep_cells entries must be >= 8");
  }
  if (s.experiment == Experiment::BandSweep && s.sweep_cells.empty()) {
    throw ConfigError("band-sweep needs sweep_cells");
  }
}

}  // namespace fqnm
