// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration: one `key = value` file per experiment, with
// command-line overrides applied on top. Relative paths are resolved
// against the directory of the file that names them.
//
//   device            = reference_device.dev
//   hamiltonian       = h2_1.5A_sto3g_parity_z2.ham
//   levels            = 3            # overrides the device file
//   frame             = dressed      # or bare
//   initial_label     = 01
//   duration          = 20           # ns
//   n_segments        = 100
//   amp_bound         = 0.020        # GHz, Omega/2pi
//   detuning_bound    = 1.0          # GHz
//   n_trotter         = 1000
//   normalize         = true
//   penalty_rate      = 0            # Hartree per percentage point
//   leakage_threshold = 1
//   penalty_smoothing = 0.005        # leakage width of the rounded kink
//   memory_pairs, max_iters, grad_tol, cost_tol, stall_iters,
//   success_threshold                # optimizer settings
//   seed = 0, starts = 100, threads = 1
//   durations = 14, 14.25, 14.5      # or scan_start / scan_stop / scan_step
//   stop_after_first_success = false
//   epsilon = 1e-4, saturation_tol = 1e-3, n_quad = 512
//   dyson_initial = 01, dyson_final = 10
//   out = results                    # relative to the working directory

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qpulse/analysis.hpp"

namespace qpulse {

struct ExperimentConfig {
  std::filesystem::path device_file;
  std::filesystem::path hamiltonian_file;
  std::optional<int> levels;
  Frame frame = Frame::dressed;
  std::string initial_label = "01";
  double duration = 20.0;
  int n_segments = 100;
  PulseBounds bounds;
  int n_trotter = 1000;
  ObjectiveConfig objective;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  int starts = 100;
  int threads = 1;
  std::vector<double> durations;
  std::optional<double> scan_start, scan_stop, scan_step;
  bool stop_after_first_success = false;
  CertificateOptions certificate;
  int n_quad = 512;
  std::string dyson_initial = "01";
  std::string dyson_final = "10";
  std::filesystem::path out = "results";

  /// Sets one key from its text value; `base` resolves relative paths.
  /// Throws InputError for unknown keys or malformed values.
  void set(const std::string &key, const std::string &value,
           const std::filesystem::path &base = {});

  /// Throws InputError when a required file is missing or a value is out
  /// of range.
  void validate() const;

  /// `durations` if given, else scan_start, scan_start + scan_step, ...
  /// up to scan_stop (inclusive within 1e-9), else {duration}.
  std::vector<double> duration_grid() const;
};

/// Parses a config file; errors carry the path and line number.
ExperimentConfig load_config(const std::filesystem::path &path);

/// Device with the level override applied.
DeviceSpec load_device(const ExperimentConfig &cfg);

/// Problem at cfg.duration built from the config's files and settings.
CtrlProblem make_problem(const ExperimentConfig &cfg);

MultistartOptions multistart_options(const ExperimentConfig &cfg);

} // namespace qpulse
