// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qpulse/objective.hpp"
#include "qpulse/propagator.hpp"
#include "qpulse/pulsegrid.hpp"

namespace qpulse {

// Sign conventions, stated once.
//
// The costate is the gradient costate: lambda(T) = dJ/d<psi(T)|, so that a
// perturbation of the final state changes the cost by 2 Re<lambda|dpsi>.
// With J = <psi|H_mol|psi> this is lambda(T) = H_mol psi(T).
//
// The switching function is the derivative of Pontryagin's control
// function, which is maximized along optimal paths:
//   phi_q(t) = 2 Re<lambda(t)| i B_q(t) |psi(t)>,
//   B_q(t)   = e^{i H_D t} (e^{i 2pi nu_q t} a_q + h.c.) e^{-i H_D t}.
// It satisfies dJ/dOmega_q(t) = -2pi phi_q(t): an optimal bounded control
// sits at the upper bound where phi_q > 0 and at the lower bound where
// phi_q < 0. The optimizer minimizes J and therefore follows -dJ, i.e.
// the direction of +phi.

/// lambda(T) for the cost of `cfg`: H psi for the plain expectation,
/// (H - E P) psi / <psi|P|psi> for the normalized energy, plus
/// -(dpenalty/dleakage) P psi above the leakage threshold.
CVector terminal_costate(const CVector &psi_T, const Observable &obs,
                         const ObjectiveConfig &cfg);

/// Costate at every Trotter grid time t_0 .. t_n (index n is lambda_T),
/// obtained by applying the exact adjoint of each forward step.
std::vector<CVector> backpropagate_costate(const ControlSystem &sys,
                                           const PulseSchedule &s,
                                           const CVector &lambda_T,
                                           int n_trotter);

struct SwitchingTrace {
  std::vector<double> times;                    // ns, Trotter grid
  std::vector<std::vector<double>> phi;         // [qubit][time]
  std::vector<std::vector<double>> pulse;       // [qubit][time], GHz
};

/// Evaluates phi_q on the grid shared by the two trajectories. Throws
/// InputError when the trajectories have different lengths.
SwitchingTrace switching_function(const ControlSystem &sys,
                                  const PulseSchedule &s,
                                  const std::vector<CVector> &psi_traj,
                                  const std::vector<CVector> &lambda_traj);

struct CostGradient {
  EnergyReport report;
  Eigen::VectorXd gradient; // packed like ParameterVector, Hartree/GHz
};

/// Cost and its exact gradient with respect to every segment amplitude and
/// drive frequency: the derivative of the discrete propagator, accumulated
/// step by step from the stored forward states and the back-propagated
/// costate.
class CtrlObjective {
public:
  /// `obs` and `psi0` in bare coordinates; `layout` fixes the segment
  /// count, duration and bounds of every schedule evaluated.
  CtrlObjective(const ControlSystem &sys, const Observable &obs,
                const CVector &psi0, const PulseSchedule &layout,
                const ObjectiveConfig &cfg, int n_trotter);

  /// Not thread-safe: each concurrent task needs its own instance.
  EnergyReport evaluate(const Eigen::VectorXd &x,
                        Eigen::VectorXd *gradient = nullptr) const;

  const PulseSchedule &layout() const { return layout_; }
  ParameterVector pack(const PulseSchedule &s) const;
  PulseSchedule unpack(const Eigen::VectorXd &x) const;
  /// Final state of the last evaluation, bare coordinates.
  CVector last_state() const;

private:
  const ControlSystem &sys_;
  Observable obs_; // dressed coordinates
  CVector psi0_;   // dressed coordinates
  PulseSchedule layout_;
  ObjectiveConfig cfg_;
  int n_trotter_;
  CMatrix phases_; // interaction phases at the step midpoints
  mutable CMatrix states_; // forward states of the last evaluation, by column
};

CostGradient gradient(const ControlSystem &sys, const PulseSchedule &s,
                      const Observable &obs, const ObjectiveConfig &cfg,
                      int n_trotter, const CVector &psi0);

/// Forward state, costate and switching function of a schedule; the
/// costate terminal condition follows `cfg`.
SwitchingTrace switching_trace(const ControlSystem &sys,
                               const PulseSchedule &s, const Observable &obs,
                               const ObjectiveConfig &cfg, int n_trotter,
                               const CVector &psi0);

} // namespace qpulse
