// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qpulse/adjoint.hpp"
#include "qpulse/optimizer.hpp"

namespace qpulse {

/// One ctrl-VQE state-preparation problem at a fixed pulse duration.
struct CtrlProblem {
  DeviceSpec device;
  PauliHamiltonian hamiltonian;
  Frame frame = Frame::dressed;
  std::string initial_label = "01";
  double duration = 20.0; // ns
  int n_segments = 100;
  PulseBounds bounds;
  int n_trotter = 1000;
  ObjectiveConfig objective;

  CtrlProblem at_duration(double t) const;
};

/// Device, observable and reference energy shared by every run of a
/// problem; immutable once built.
class PreparedProblem {
public:
  explicit PreparedProblem(const CtrlProblem &problem);

  const CtrlProblem &problem() const { return problem_; }
  const ControlSystem &system() const { return *system_; }
  const Observable &observable() const { return observable_; }
  const CVector &initial_state() const { return psi0_; }
  /// Exact ground-state energy of the molecular Hamiltonian.
  double reference_energy() const { return reference_energy_; }

  PulseSchedule random_start(std::uint64_t seed) const;
  CtrlObjective objective() const;

private:
  CtrlProblem problem_;
  std::unique_ptr<ControlSystem> system_;
  Observable observable_;
  CVector psi0_;
  double reference_energy_ = 0.0;
};

struct RunResult {
  PulseSchedule schedule;
  EnergyReport report;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool success = false; // |energy - reference| < threshold
  double projected_grad_norm = 0.0;
  std::string stop_reason;
  std::uint64_t seed = 0;
};

/// Per-iteration record for the JSON-lines log.
struct IterationLog {
  int iteration = 0;
  EnergyReport report;
  double projected_grad_norm = 0.0;
};

using IterationLogger = std::function<void(const IterationLog &)>;

/// Minimizes from `start`. With cfg.target_cost unset, optimization stops
/// early once the energy reaches the success threshold only if
/// `stop_at_success` is true.
RunResult optimize_schedule(const PreparedProblem &prepared,
                            const PulseSchedule &start,
                            const OptimizerConfig &cfg,
                            bool stop_at_success = true,
                            const IterationLogger &log = {},
                            std::uint64_t seed = 0);

RunResult optimize_seed(const PreparedProblem &prepared, std::uint64_t seed,
                        const OptimizerConfig &cfg,
                        bool stop_at_success = true);

struct MultistartOptions {
  int n_starts = 100;
  std::uint64_t seed0 = 0;
  int threads = 1;
  bool stop_at_success = true;
  /// Skip the remaining starts once one succeeds. Only whether a success
  /// exists is then meaningful, not the probability.
  bool stop_after_first_success = false;
};

struct MultistartResult {
  std::vector<RunResult> runs; // runs[i] started from seed0 + i
  int successes = 0;
  int attempted = 0;
  double success_probability = 0.0; // successes / attempted
};

/// Independent minimizations from random_schedule(seed0 + i). Results do
/// not depend on the thread count or completion order.
MultistartResult multistart(const PreparedProblem &prepared,
                            const OptimizerConfig &cfg,
                            const MultistartOptions &opts);

} // namespace qpulse
