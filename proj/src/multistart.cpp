// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/multistart.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qpulse/errors.hpp"

namespace qpulse {

CtrlProblem CtrlProblem::at_duration(double t) const {
  CtrlProblem out = *this;
  out.duration = t;
  return out;
}

PreparedProblem::PreparedProblem(const CtrlProblem &problem)
    : problem_(problem) {
  problem_.objective.validate();
  if (!(problem_.duration > 0.0) || problem_.n_segments < 1)
    throw InputError("problem needs a positive duration and segment count");
  if (problem_.n_trotter < 1)
    throw InputError("n_trotter must be at least 1");
  system_ = std::make_unique<ControlSystem>(problem_.device);
  observable_ = make_observable(problem_.hamiltonian, problem_.device,
                                problem_.frame);
  psi0_ = basis_state(problem_.device, problem_.frame, problem_.initial_label);
  reference_energy_ = exact_ground_state(problem_.hamiltonian).energy;
}

PulseSchedule PreparedProblem::random_start(std::uint64_t seed) const {
  return random_schedule(seed, problem_.bounds, problem_.device.omega,
                         problem_.n_segments, problem_.duration);
}

CtrlObjective PreparedProblem::objective() const {
  return CtrlObjective(*system_, observable_, psi0_, random_start(0),
                       problem_.objective, problem_.n_trotter);
}

RunResult optimize_schedule(const PreparedProblem &prepared,
                            const PulseSchedule &start,
                            const OptimizerConfig &cfg, bool stop_at_success,
                            const IterationLogger &log, std::uint64_t seed) {
  start.validate(prepared.problem().device.omega);
  const CtrlObjective objective(prepared.system(), prepared.observable(),
                                prepared.initial_state(), start,
                                prepared.problem().objective,
                                prepared.problem().n_trotter);
  OptimizerConfig run_cfg = cfg;
  if (stop_at_success && !run_cfg.target_cost)
    run_cfg.target_cost =
        prepared.reference_energy() + cfg.energy_success_threshold;

  const ParameterVector x0 = objective.pack(start);
  EnergyReport last;
  CostFunction f = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
    last = objective.evaluate(x, &grad);
    return last.total_cost;
  };
  IterationCallback on_iteration;
  if (log)
    on_iteration = [&](const IterationInfo &info) {
      // The callback fires right after the accepted point is evaluated
      // except at iteration 0, where `last` is the start point.
      log({info.iteration, objective.evaluate(*info.x), info.projected_grad_norm});
    };
  const MinimizeResult m =
      minimize(f, x0.values, x0.lower, x0.upper, run_cfg, on_iteration);

  RunResult r;
  r.schedule = objective.unpack(m.x);
  r.report = objective.evaluate(m.x);
  r.iterations = m.iterations;
  r.evaluations = m.evaluations;
  r.projected_grad_norm = m.projected_grad_norm;
  r.stop_reason = to_string(m.reason);
  r.seed = seed;
  r.success = std::abs(r.report.energy - prepared.reference_energy()) <
              cfg.energy_success_threshold;
  r.converged = m.converged() || r.success;
  return r;
}

RunResult optimize_seed(const PreparedProblem &prepared, std::uint64_t seed,
                        const OptimizerConfig &cfg, bool stop_at_success) {
  return optimize_schedule(prepared, prepared.random_start(seed), cfg,
                           stop_at_success, {}, seed);
}

MultistartResult multistart(const PreparedProblem &prepared,
                            const OptimizerConfig &cfg,
                            const MultistartOptions &opts) {
  if (opts.n_starts < 1)
    throw InputError("n_starts must be at least 1");
  MultistartResult out;
  out.runs.resize(opts.n_starts);
  std::vector<char> done(opts.n_starts, 0);
  std::atomic<int> next{0};
  std::atomic<bool> found{false};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opts.n_starts)
        return;
      if (opts.stop_after_first_success && found.load())
        return;
      out.runs[i] = optimize_seed(prepared, opts.seed0 + i, cfg,
                                  opts.stop_at_success);
      done[i] = 1;
      if (out.runs[i].success)
        found.store(true);
    }
  };
  const int threads = std::clamp(opts.threads, 1, opts.n_starts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  std::vector<RunResult> kept;
  for (int i = 0; i < opts.n_starts; ++i)
    if (done[i])
      kept.push_back(std::move(out.runs[i]));
  out.runs = std::move(kept);
  out.attempted = static_cast<int>(out.runs.size());
  out.successes = static_cast<int>(
      std::count_if(out.runs.begin(), out.runs.end(),
                    [](const RunResult &r) { return r.success; }));
  out.success_probability =
      static_cast<double>(out.successes) / out.attempted;
  return out;
}

} // namespace qpulse
