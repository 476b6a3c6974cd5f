// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpulse/errors.hpp"
#include "qpulse/io.hpp"

namespace qpulse {

namespace {

double to_double(const std::string &key, const std::string &text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw InputError(key + ": expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string &key, const std::string &text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw InputError(key + ": expected an integer, got '" + text + "'");
  return v;
}

int to_int(const std::string &key, const std::string &text) {
  return static_cast<int>(to_integer(key, text));
}

bool to_bool(const std::string &key, const std::string &text) {
  if (text == "true" || text == "1" || text == "yes")
    return true;
  if (text == "false" || text == "0" || text == "no")
    return false;
  throw InputError(key + ": expected true or false, got '" + text + "'");
}

std::filesystem::path resolve(const std::string &text,
                              const std::filesystem::path &base) {
  const std::filesystem::path p(text);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::vector<double> to_list(const std::string &key, const std::string &text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw InputError(key + ": empty list entry");
    out.push_back(to_double(key, item.substr(b, e - b + 1)));
  }
  return out;
}

} // namespace

void ExperimentConfig::set(const std::string &key, const std::string &value,
                           const std::filesystem::path &base) {
  if (key == "device")
    device_file = resolve(value, base);
  else if (key == "hamiltonian")
    hamiltonian_file = resolve(value, base);
  else if (key == "levels")
    levels = to_int(key, value);
  else if (key == "frame")
    frame = parse_frame(value);
  else if (key == "initial_label")
    initial_label = value;
  else if (key == "duration")
    duration = to_double(key, value);
  else if (key == "n_segments")
    n_segments = to_int(key, value);
  else if (key == "amp_bound")
    bounds.amp_bound = to_double(key, value);
  else if (key == "detuning_bound")
    bounds.detuning_bound = to_double(key, value);
  else if (key == "n_trotter")
    n_trotter = to_int(key, value);
  else if (key == "normalize")
    objective.normalize = to_bool(key, value);
  else if (key == "penalty_rate")
    objective.penalty_rate = to_double(key, value);
  else if (key == "leakage_threshold")
    objective.leakage_threshold = to_double(key, value);
  else if (key == "penalty_smoothing")
    objective.penalty_smoothing = to_double(key, value);
  else if (key == "memory_pairs")
    optimizer.memory_pairs = to_int(key, value);
  else if (key == "max_iters")
    optimizer.max_iters = to_int(key, value);
  else if (key == "grad_tol")
    optimizer.grad_tol = to_double(key, value);
  else if (key == "cost_tol")
    optimizer.cost_tol = to_double(key, value);
  else if (key == "stall_iters")
    optimizer.stall_iters = to_int(key, value);
  else if (key == "success_threshold")
    optimizer.energy_success_threshold = to_double(key, value);
  else if (key == "seed") {
    const long long v = to_integer(key, value);
    if (v < 0)
      throw InputError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(v);
  } else if (key == "starts")
    starts = to_int(key, value);
  else if (key == "threads")
    threads = to_int(key, value);
  else if (key == "durations")
    durations = to_list(key, value);
  else if (key == "scan_start")
    scan_start = to_double(key, value);
  else if (key == "scan_stop")
    scan_stop = to_double(key, value);
  else if (key == "scan_step")
    scan_step = to_double(key, value);
  else if (key == "stop_after_first_success")
    stop_after_first_success = to_bool(key, value);
  else if (key == "epsilon")
    certificate.epsilon = to_double(key, value);
  else if (key == "saturation_tol")
    certificate.saturation_tol = to_double(key, value);
  else if (key == "n_quad")
    n_quad = to_int(key, value);
  else if (key == "dyson_initial")
    dyson_initial = value;
  else if (key == "dyson_final")
    dyson_final = value;
  else if (key == "out")
    out = value;
  else
    throw InputError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (device_file.empty())
    throw InputError("config needs a device file");
  if (hamiltonian_file.empty())
    throw InputError("config needs a hamiltonian file");
  for (const auto &f : {device_file, hamiltonian_file})
    if (!std::filesystem::exists(f))
      throw InputError("file not found: " + f.string());
  if (levels && *levels < 2)
    throw InputError("levels must be at least 2");
  if (!(duration > 0.0) || n_segments < 1 || n_trotter < 1)
    throw InputError("duration, n_segments and n_trotter must be positive");
  if (!(bounds.amp_bound >= 0.0) || !(bounds.detuning_bound >= 0.0))
    throw InputError("bounds must be non-negative");
  if (starts < 1 || threads < 1)
    throw InputError("starts and threads must be at least 1");
  if (n_quad < 1)
    throw InputError("n_quad must be at least 1");
  if (!(certificate.epsilon >= 0.0) || !(certificate.saturation_tol >= 0.0))
    throw InputError("certificate tolerances must be non-negative");
  if (scan_start || scan_stop || scan_step) {
    if (!(scan_start && scan_stop && scan_step))
      throw InputError("scan_start, scan_stop and scan_step go together");
    if (!(*scan_step > 0.0) || !(*scan_stop >= *scan_start) || !(*scan_start > 0.0))
      throw InputError("scan grid needs 0 < scan_start <= scan_stop and scan_step > 0");
  }
  objective.validate();
  optimizer.validate();
}

std::vector<double> ExperimentConfig::duration_grid() const {
  if (!durations.empty())
    return durations;
  if (scan_start && scan_stop && scan_step && *scan_step > 0.0) {
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((*scan_stop - *scan_start) / *scan_step + 1e-9));
    for (int i = 0; i <= n; ++i)
      out.push_back(*scan_start + i * *scan_step);
    return out;
  }
  return {duration};
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path.string());
  const auto kv = parse_key_values(in, path.string());
  ExperimentConfig cfg;
  const auto base = path.parent_path();
  for (const auto &[key, v] : kv) {
    try {
      cfg.set(key, v.first, base);
    } catch (const InputError &e) {
      throw ParseError(path.string(), v.second, e.what());
    }
  }
  return cfg;
}

DeviceSpec load_device(const ExperimentConfig &cfg) {
  DeviceSpec spec = read_device_file(cfg.device_file);
  if (cfg.levels)
    spec = spec.with_levels(*cfg.levels);
  return spec;
}

CtrlProblem make_problem(const ExperimentConfig &cfg) {
  CtrlProblem p;
  p.device = load_device(cfg);
  p.hamiltonian = read_hamiltonian_file(cfg.hamiltonian_file);
  if (p.hamiltonian.n_qubits() != p.device.n_transmons)
    throw InputError("hamiltonian acts on " +
                     std::to_string(p.hamiltonian.n_qubits()) +
                     " qubits but the device has " +
                     std::to_string(p.device.n_transmons) + " transmons");
  p.frame = cfg.frame;
  p.initial_label = cfg.initial_label;
  p.duration = cfg.duration;
  p.n_segments = cfg.n_segments;
  p.bounds = cfg.bounds;
  p.n_trotter = cfg.n_trotter;
  p.objective = cfg.objective;
  return p;
}

MultistartOptions multistart_options(const ExperimentConfig &cfg) {
  MultistartOptions o;
  o.n_starts = cfg.starts;
  o.seed0 = cfg.seed;
  o.threads = cfg.threads;
  o.stop_after_first_success = cfg.stop_after_first_success;
  return o;
}

} // namespace qpulse
