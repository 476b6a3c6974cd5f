// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qpulse/model.hpp"
#include "qpulse/pulsegrid.hpp"

namespace qpulse {

/// Device data precomputed once for propagation: dressed energies and the
/// lowering operators expressed in the labelled dressed basis.
///
/// Public functions take and return states in bare product coordinates.
/// Internally the drive is applied in dressed coordinates, where the
/// interaction-picture rotation e^{i H_D t} is diagonal.
class ControlSystem {
public:
  explicit ControlSystem(const DeviceSpec &spec,
                         std::size_t cap = kDefaultMaxDimension);

  const DeviceSpec &spec() const { return spec_; }
  Eigen::Index dim() const { return energies_.size(); }
  int n_transmons() const { return spec_.n_transmons; }

  /// Dressed energies ordered by bare label, rad/ns.
  const RVector &energies() const { return energies_; }
  /// Columns are labelled dressed states in bare coordinates.
  const CMatrix &dressed_vectors() const { return vectors_; }
  /// V^dagger a_q V.
  const CMatrix &lowering(int q) const { return lowering_[q]; }
  const CMatrix &raising(int q) const { return raising_[q]; }
  /// Max column sum of |a_q| plus that of |a_q^dagger| in dressed
  /// coordinates; bounds the drive generator's 1-norm.
  double drive_norm_bound(int q) const { return drive_norm_[q]; }

  CVector to_dressed(const CVector &bare) const;
  CVector to_bare(const CVector &dressed) const;
  CMatrix operator_to_dressed(const CMatrix &bare) const;

  /// e^{i H_D t} (e^{i 2pi nu t} a_q + h.c.) e^{-i H_D t}, bare coordinates,
  /// without the 2pi Omega prefactor.
  CMatrix drive_operator_at(int q, double nu, double t) const;

  /// H_{I,C}(t) in rad/ns, bare coordinates.
  CMatrix control_hamiltonian_at(const PulseSchedule &s, double t) const;

private:
  DeviceSpec spec_;
  RVector energies_;
  CMatrix vectors_;
  std::vector<CMatrix> lowering_;
  std::vector<CMatrix> raising_;
  std::vector<double> drive_norm_;
};

/// Time grid of a fixed-step propagation: n_steps steps of width T/n, each
/// using the control Hamiltonian sampled at the step midpoint.
struct TrotterGrid {
  int n_steps = 0;
  double dt = 0.0;

  double time(int j) const { return j * dt; }
  double midpoint(int j) const { return (j + 0.5) * dt; }
};

TrotterGrid make_grid(const PulseSchedule &s, int n_trotter);

/// Populations of selected basis states on the Trotter grid.
struct EvolutionTrace {
  std::vector<double> times;                    // ns
  std::vector<std::string> labels;              // e.g. "01", "20"
  std::vector<std::vector<double>> populations; // [label][time]
  Frame frame = Frame::dressed;
};

struct EvolutionResult {
  CVector final_state; // bare coordinates
  EvolutionTrace trace;
};

/// Every basis label of the device, index order.
std::vector<std::string> all_labels(const DeviceSpec &spec);

/// Propagates psi0 (bare coordinates, unit norm) through the schedule with
/// n_trotter exact-exponential steps. Populations of `record` are taken in
/// the basis of `frame`. Throws InputError for a non-normalized psi0.
EvolutionResult evolve(const ControlSystem &sys, const PulseSchedule &s,
                       const CVector &psi0, int n_trotter,
                       const std::vector<std::string> &record = {},
                       Frame frame = Frame::dressed);

/// States at every Trotter grid time t_0 .. t_n, bare coordinates.
std::vector<CVector> forward_trajectory(const ControlSystem &sys,
                                        const PulseSchedule &s,
                                        const CVector &psi0, int n_trotter);

/// Applies step j's propagator (or its exact adjoint) in place, bare
/// coordinates.
void apply_step(const ControlSystem &sys, const PulseSchedule &s,
                const TrotterGrid &grid, int j, CVector &psi,
                bool adjoint = false);

/// Reference step propagator exp(-i H dt) built by Hermitian
/// eigendecomposition of the bare-coordinate control Hamiltonian.
CMatrix reference_step_unitary(const ControlSystem &sys,
                               const PulseSchedule &s, const TrotterGrid &grid,
                               int j);

struct Projection {
  CVector computational; // 2^n amplitudes, normalized, in frame labels
  double leakage = 0.0;  // 1 - ||P psi||^2
};

/// Throws SingularProjectionError when ||P psi||^2 < 1e-12.
Projection project_and_normalize(const DeviceSpec &spec, const CVector &psi,
                                 Frame frame);

/// Populations of `labels` in the basis of `frame` for a bare-coordinate
/// state.
std::vector<double> populations(const ControlSystem &sys, const CVector &psi,
                                const std::vector<std::string> &labels,
                                Frame frame);

} // namespace qpulse
