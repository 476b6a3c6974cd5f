// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace qpulse {

struct OptimizerConfig {
  int memory_pairs = 10;
  int max_iters = 5000;
  double grad_tol = 1e-9;  // infinity norm of the projected gradient
  double cost_tol = 1e-10; // accepted-cost decrease
  /// Consecutive iterations with a decrease below cost_tol before stopping.
  int stall_iters = 5;
  double energy_success_threshold = 1e-8; // Hartree, vs exact ground state
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  /// Stop as soon as the cost drops to this value.
  std::optional<double> target_cost;

  void validate() const;
};

/// Cost at x; writes the gradient into `grad`.
using CostFunction =
    std::function<double(const Eigen::VectorXd &x, Eigen::VectorXd &grad)>;

struct IterationInfo {
  int iteration = 0;
  double cost = 0.0;
  double projected_grad_norm = 0.0;
  const Eigen::VectorXd *x = nullptr;
};

using IterationCallback = std::function<void(const IterationInfo &)>;

enum class StopReason {
  projected_gradient,
  cost_change,
  target_reached,
  line_search,
  max_iterations
};

std::string to_string(StopReason reason);

struct MinimizeResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  double projected_grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  StopReason reason = StopReason::max_iterations;

  bool converged() const { return reason != StopReason::max_iterations; }
};

/// ||x - clip(x - g)||_inf, the first-order optimality measure on a box.
double projected_gradient_norm(const Eigen::VectorXd &x,
                               const Eigen::VectorXd &g,
                               const Eigen::VectorXd &lower,
                               const Eigen::VectorXd &upper);

/// Bound-constrained limited-memory BFGS. Each iteration fixes the
/// variables held at a bound by the gradient, takes a quasi-Newton step on
/// the remaining free variables, and backtracks along the projected path
/// until the Armijo condition holds, so every accepted iterate is feasible
/// and the accepted costs never increase. Throws NumericalError (with the
/// parameter point) if the cost is not finite, and InputError if x0 is
/// outside the box.
MinimizeResult minimize(const CostFunction &f, const Eigen::VectorXd &x0,
                        const Eigen::VectorXd &lower,
                        const Eigen::VectorXd &upper,
                        const OptimizerConfig &cfg,
                        const IterationCallback &on_iteration = {});

} // namespace qpulse
