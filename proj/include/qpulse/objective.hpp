// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qpulse/model.hpp"

namespace qpulse {

/// Leakage penalty: penalty_rate Hartree per percentage point of leakage
/// above leakage_threshold. The default threshold of 1 disables it.
/// penalty_smoothing > 0 rounds the kink into a quadratic over
/// [threshold, threshold + smoothing], keeping the penalty zero at and below
/// the threshold; L-BFGS otherwise stalls on the kink. 0 gives the exact hinge.
struct ObjectiveConfig {
  double penalty_rate = 0.0;
  double leakage_threshold = 1.0;
  double penalty_smoothing = 0.005;
  bool normalize = true;

  void validate() const;
};

struct EnergyReport {
  double energy = 0.0;           // Hartree
  double leakage_fraction = 0.0; // population outside the subspace
  double penalty = 0.0;          // Hartree
  double total_cost = 0.0;       // energy + penalty
};

/// Molecular Hamiltonian embedded in the full qudit space together with
/// the projector that defines the computational subspace. Both matrices
/// share one coordinate system with the states they are applied to.
struct Observable {
  CMatrix hamiltonian;
  CMatrix projector;
};

/// Bare-coordinate observable for `frame`.
Observable make_observable(const PauliHamiltonian &h, const DeviceSpec &spec,
                           Frame frame);

double leakage_penalty(double leakage, const ObjectiveConfig &cfg);
/// d(penalty)/d(leakage); zero at and below the threshold.
double leakage_penalty_slope(double leakage, const ObjectiveConfig &cfg);

/// <psi|P H P|psi> / <psi|P|psi> (or the plain expectation when
/// normalize is off) plus the leakage penalty. Throws
/// SingularProjectionError when <psi|P|psi> < 1e-12.
EnergyReport energy(const CVector &psi, const Observable &obs,
                    const ObjectiveConfig &cfg);

} // namespace qpulse
