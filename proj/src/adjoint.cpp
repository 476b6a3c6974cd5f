// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/adjoint.hpp"

#include <cmath>

#include "qpulse/errors.hpp"
#include "step_kernel.hpp"

namespace qpulse {

CVector terminal_costate(const CVector &psi_T, const Observable &obs,
                         const ObjectiveConfig &cfg) {
  const CVector h_psi = obs.hamiltonian * psi_T;
  const CVector p_psi = obs.projector * psi_T;
  const double weight = psi_T.dot(p_psi).real();
  CVector lambda;
  if (cfg.normalize) {
    if (weight < 1e-12)
      throw SingularProjectionError(
          "state has no weight in the computational subspace");
    const double e = psi_T.dot(h_psi).real() / weight;
    lambda = (h_psi - e * p_psi) / weight;
  } else {
    lambda = h_psi;
  }
  const double slope = leakage_penalty_slope(1.0 - weight, cfg);
  if (slope != 0.0)
    lambda -= slope * p_psi;
  return lambda;
}

std::vector<CVector> backpropagate_costate(const ControlSystem &sys,
                                           const PulseSchedule &s,
                                           const CVector &lambda_T,
                                           int n_trotter) {
  detail::StepKernel kernel(sys, s, n_trotter);
  std::vector<CVector> out(kernel.grid().n_steps + 1);
  CVector y = sys.to_dressed(lambda_T);
  out.back() = lambda_T;
  for (int m = kernel.n_micro() - 1; m >= 0; --m) {
    kernel.prepare(m);
    kernel.apply(y, true);
    if (m % kernel.substeps() == 0)
      out[m / kernel.substeps()] = sys.to_bare(y);
  }
  return out;
}

SwitchingTrace switching_function(const ControlSystem &sys,
                                  const PulseSchedule &s,
                                  const std::vector<CVector> &psi_traj,
                                  const std::vector<CVector> &lambda_traj) {
  if (psi_traj.size() != lambda_traj.size() || psi_traj.size() < 2)
    throw InputError("state and costate trajectories are on different grids");
  const int n_steps = static_cast<int>(psi_traj.size()) - 1;
  const TrotterGrid grid = make_grid(s, n_steps);
  const int nq = s.n_qubits();
  SwitchingTrace trace;
  trace.phi.assign(nq, {});
  trace.pulse.assign(nq, {});
  const cplx I(0.0, 1.0);
  for (int j = 0; j <= n_steps; ++j) {
    const double t = j == n_steps ? s.duration : grid.time(j);
    trace.times.push_back(t);
    const CVector phase = detail::interaction_phase(sys, t);
    const CVector x = phase.conjugate().cwiseProduct(sys.to_dressed(psi_traj[j]));
    const CVector y =
        phase.conjugate().cwiseProduct(sys.to_dressed(lambda_traj[j]));
    for (int q = 0; q < nq; ++q) {
      const cplx carrier = std::polar(1.0, kTwoPi * s.drive_freq[q] * t);
      const cplx braket = carrier * y.dot(sys.lowering(q) * x) +
                          std::conj(carrier) * y.dot(sys.raising(q) * x);
      trace.phi[q].push_back(2.0 * (I * braket).real());
      trace.pulse[q].push_back(sample_at(s, q, t));
    }
  }
  return trace;
}

CtrlObjective::CtrlObjective(const ControlSystem &sys, const Observable &obs,
                             const CVector &psi0, const PulseSchedule &layout,
                             const ObjectiveConfig &cfg, int n_trotter)
    : sys_(sys),
      obs_{sys.operator_to_dressed(obs.hamiltonian),
           sys.operator_to_dressed(obs.projector)},
      psi0_(sys.to_dressed(psi0)), layout_(layout), cfg_(cfg),
      n_trotter_(n_trotter) {
  cfg_.validate();
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw InputError("initial state is not normalized");
  if (layout.n_qubits() != sys.n_transmons())
    throw InputError("schedule drives " + std::to_string(layout.n_qubits()) +
                     " qubits but the device has " +
                     std::to_string(sys.n_transmons()) + " transmons");
  phases_ = detail::midpoint_phases(sys, make_grid(layout, n_trotter));
}

ParameterVector CtrlObjective::pack(const PulseSchedule &s) const {
  return qpulse::pack(s, sys_.spec().omega);
}

PulseSchedule CtrlObjective::unpack(const Eigen::VectorXd &x) const {
  return qpulse::unpack(x, layout_);
}

CVector CtrlObjective::last_state() const {
  if (states_.cols() == 0)
    throw InputError("no evaluation has run yet");
  return sys_.to_bare(states_.col(states_.cols() - 1));
}

namespace {

template <int D>
EnergyReport evaluate_fixed(const ControlSystem &sys, const PulseSchedule &s,
                            int n_trotter, const CMatrix &phases,
                            const CVector &psi0, const Observable &obs,
                            const ObjectiveConfig &cfg, CMatrix &states,
                            Eigen::VectorXd *grad) {
  using Kernel = detail::BasicStepKernel<D>;
  using Vec = typename Kernel::Vec;
  using Mat = typename Kernel::Mat;
  Kernel kernel(sys, s, n_trotter, &phases);
  const int n_micro = kernel.n_micro();
  const auto d = sys.dim();
  states.resize(d, n_micro + 1);
  Vec x = psi0;
  states.col(0) = x;
  for (int m = 0; m < n_micro; ++m) {
    kernel.prepare(m);
    kernel.apply(x, false);
    states.col(m + 1) = x;
  }
  const CVector psi_T = x;
  const EnergyReport report = energy(psi_T, obs, cfg);
  if (grad == nullptr)
    return report;

  const int nq = s.n_qubits();
  const int nseg = s.n_segments;
  grad->setZero(static_cast<Eigen::Index>(nq) * nseg + nq);
  const double dt = kernel.micro_dt();
  const cplx minus_i_dt(0.0, -dt);
  const cplx plus_i_dt(0.0, dt);

  Vec lambda = terminal_costate(psi_T, obs, cfg);
  std::vector<Vec> u(41, Vec::Zero(d)), v(42, Vec::Zero(d));
  Vec w = Vec::Zero(d);
  Mat weights = Mat::Zero(d, d);
  for (int m = n_micro - 1; m >= 0; --m) {
    kernel.prepare(m);
    const int order = kernel.order();
    const Vec &phase = kernel.phase();
    const Mat &gen = kernel.generator();
    // u_l = A^l x and v_i = (A^dagger)^i y with A = -i K dt.
    u[0] = phase.conjugate().cwiseProduct(states.col(m));
    v[0] = phase.conjugate().cwiseProduct(lambda);
    for (int l = 1; l < order; ++l)
      u[l].noalias() = minus_i_dt * (gen * u[l - 1]);
    for (int i = 1; i <= order; ++i)
      v[i].noalias() = plus_i_dt * (gen * v[i - 1]);
    // <y| L(A, E) |x> = sum_{cd} E_cd W_cd for the Frechet derivative L of
    // the truncated series, with
    //   W = sum_{i+l<order} conj(v_i) u_l^T / (i+l+1)!.
    weights.setZero();
    for (int l = 0; l < order; ++l) {
      w.setZero();
      double inv_fact = 1.0;
      for (int k = 1; k <= l + 1; ++k)
        inv_fact /= k;
      for (int i = 0; i + l < order; ++i) {
        w += inv_fact * v[i];
        inv_fact /= (i + l + 2);
      }
      weights.noalias() += w.conjugate() * u[l].transpose();
    }
    for (int q = 0; q < nq; ++q) {
      const cplx lower = (kernel.lowering(q).array() * weights.array()).sum();
      const cplx upper = (kernel.raising(q).array() * weights.array()).sum();
      const cplx e = kernel.drive_phase(q);
      const cplx sum = e * lower + std::conj(e) * upper;
      const cplx diff = e * lower - std::conj(e) * upper;
      (*grad)[q * nseg + kernel.segment()] +=
          2.0 * (minus_i_dt * kTwoPi * sum).real();
      const double omega = kernel.amplitude(q);
      if (omega != 0.0)
        (*grad)[nq * nseg + q] +=
            2.0 * (dt * kTwoPi * kTwoPi * omega * kernel.midpoint() * diff)
                      .real();
    }
    // lambda <- U^dagger lambda = D T(A^dagger) D^dagger lambda.
    w = v[0];
    double inv_fact = 1.0;
    for (int i = 1; i <= order; ++i) {
      inv_fact /= i;
      w += inv_fact * v[i];
    }
    lambda = phase.cwiseProduct(w);
  }
  if (!grad->allFinite())
    throw NumericalError("gradient contains non-finite entries");
  return report;
}

} // namespace

EnergyReport CtrlObjective::evaluate(const Eigen::VectorXd &x,
                                     Eigen::VectorXd *grad) const {
  const PulseSchedule s = unpack(x);
  return detail::dispatch_dimension(sys_.dim(), [&](auto dim) {
    return evaluate_fixed<decltype(dim)::value>(sys_, s, n_trotter_, phases_,
                                                psi0_, obs_, cfg_, states_,
                                                grad);
  });
}

CostGradient gradient(const ControlSystem &sys, const PulseSchedule &s,
                      const Observable &obs, const ObjectiveConfig &cfg,
                      int n_trotter, const CVector &psi0) {
  s.validate(sys.spec().omega);
  CtrlObjective objective(sys, obs, psi0, s, cfg, n_trotter);
  CostGradient out;
  out.report = objective.evaluate(objective.pack(s).values, &out.gradient);
  return out;
}

SwitchingTrace switching_trace(const ControlSystem &sys,
                               const PulseSchedule &s, const Observable &obs,
                               const ObjectiveConfig &cfg, int n_trotter,
                               const CVector &psi0) {
  const auto psi = forward_trajectory(sys, s, psi0, n_trotter);
  const CVector lambda_T = terminal_costate(psi.back(), obs, cfg);
  const auto lambda = backpropagate_costate(sys, s, lambda_T, n_trotter);
  return switching_function(sys, s, psi, lambda);
}

} // namespace qpulse
