// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/objective.hpp"

#include <algorithm>
#include <cmath>

#include "qpulse/errors.hpp"

namespace qpulse {

void ObjectiveConfig::validate() const {
  if (!(penalty_rate >= 0.0))
    throw InputError("penalty_rate must be non-negative");
  if (!(leakage_threshold >= 0.0 && leakage_threshold <= 1.0))
    throw InputError("leakage_threshold must lie in [0, 1]");
  if (!(penalty_smoothing >= 0.0 && penalty_smoothing <= 1.0))
    throw InputError("penalty_smoothing must lie in [0, 1]");
}

Observable make_observable(const PauliHamiltonian &h, const DeviceSpec &spec,
                           Frame frame) {
  return {embed_molecular_hamiltonian(h, spec, frame),
          computational_projector(spec, frame)};
}

double leakage_penalty(double leakage, const ObjectiveConfig &cfg) {
  const double x = leakage - cfg.leakage_threshold;
  const double w = cfg.penalty_smoothing;
  if (x <= 0.0)
    return 0.0;
  const double h = x < w ? 0.5 * x * x / w : x - 0.5 * w;
  return 100.0 * cfg.penalty_rate * h;
}

double leakage_penalty_slope(double leakage, const ObjectiveConfig &cfg) {
  const double x = leakage - cfg.leakage_threshold;
  const double w = cfg.penalty_smoothing;
  if (x <= 0.0)
    return 0.0;
  return 100.0 * cfg.penalty_rate * (x < w ? x / w : 1.0);
}

EnergyReport energy(const CVector &psi, const Observable &obs,
                    const ObjectiveConfig &cfg) {
  const double weight = psi.dot(obs.projector * psi).real();
  if (cfg.normalize && weight < 1e-12)
    throw SingularProjectionError(
        "state has no weight in the computational subspace");
  const double expectation = psi.dot(obs.hamiltonian * psi).real();
  EnergyReport r;
  r.energy = cfg.normalize ? expectation / weight : expectation;
  r.leakage_fraction = std::clamp(1.0 - weight, 0.0, 1.0);
  r.penalty = leakage_penalty(r.leakage_fraction, cfg);
  r.total_cost = r.energy + r.penalty;
  return r;
}

} // namespace qpulse
