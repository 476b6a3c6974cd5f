// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/pulsegrid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qpulse/errors.hpp"

namespace qpulse {

int PulseSchedule::segment_at(double t) const {
  const int k = static_cast<int>(std::floor(t / segment_width()));
  return std::clamp(k, 0, n_segments - 1);
}

void PulseSchedule::validate(const std::vector<double> &omega) const {
  if (!(duration > 0.0))
    throw InputError("pulse duration must be positive");
  if (n_segments < 1)
    throw InputError("pulse needs at least one segment");
  if (amplitudes.size() != drive_freq.size())
    throw InputError("amplitude rows and drive frequencies disagree");
  if (drive_freq.size() != omega.size())
    throw InputError("schedule drives " + std::to_string(drive_freq.size()) +
                     " qubits but the device has " +
                     std::to_string(omega.size()));
  if (amp_bound < 0.0 || detuning_bound < 0.0)
    throw InputError("bounds must be non-negative");
  const double slack = 1e-12;
  for (std::size_t q = 0; q < amplitudes.size(); ++q) {
    if (amplitudes[q].size() != static_cast<std::size_t>(n_segments))
      throw InputError("qubit " + std::to_string(q) + " has " +
                       std::to_string(amplitudes[q].size()) +
                       " segments, expected " + std::to_string(n_segments));
    for (double c : amplitudes[q])
      if (!(std::abs(c) <= amp_bound + slack))
        throw InputError("amplitude outside +/- amp_bound on qubit " +
                         std::to_string(q));
    if (!(std::abs(drive_freq[q] - omega[q]) <= detuning_bound + slack))
      throw InputError("drive frequency of qubit " + std::to_string(q) +
                       " outside the detuning bound");
  }
}

double sample_at(const PulseSchedule &s, int q, double t) {
  if (!(t >= 0.0 && t <= s.duration))
    throw InputError("sample time " + std::to_string(t) +
                     " outside [0, " + std::to_string(s.duration) + "]");
  if (q < 0 || q >= s.n_qubits())
    throw InputError("qubit index out of range");
  return s.amplitudes[q][s.segment_at(t)];
}

PulseSchedule random_schedule(std::uint64_t seed, const PulseBounds &bounds,
                              const std::vector<double> &omega,
                              int n_segments, double duration) {
  PulseSchedule s;
  s.duration = duration;
  s.n_segments = n_segments;
  s.amp_bound = bounds.amp_bound;
  s.detuning_bound = bounds.detuning_bound;
  std::mt19937_64 rng(seed);
  // Map raw 53-bit draws ourselves so the stream does not depend on the
  // standard library's distribution implementation.
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  s.amplitudes.assign(omega.size(), std::vector<double>(n_segments));
  for (auto &row : s.amplitudes)
    for (double &c : row)
      c = uniform(-bounds.amp_bound, bounds.amp_bound);
  for (double w : omega)
    s.drive_freq.push_back(
        uniform(w - bounds.detuning_bound, w + bounds.detuning_bound));
  return s;
}

ParameterVector pack(const PulseSchedule &s,
                     const std::vector<double> &omega) {
  const int nq = s.n_qubits();
  const Eigen::Index n = static_cast<Eigen::Index>(nq) * s.n_segments + nq;
  ParameterVector v{Eigen::VectorXd(n), Eigen::VectorXd(n),
                    Eigen::VectorXd(n)};
  Eigen::Index i = 0;
  for (int q = 0; q < nq; ++q)
    for (int k = 0; k < s.n_segments; ++k, ++i) {
      v.values[i] = s.amplitudes[q][k];
      v.lower[i] = -s.amp_bound;
      v.upper[i] = s.amp_bound;
    }
  for (int q = 0; q < nq; ++q, ++i) {
    v.values[i] = s.drive_freq[q];
    v.lower[i] = omega[q] - s.detuning_bound;
    v.upper[i] = omega[q] + s.detuning_bound;
  }
  return v;
}

PulseSchedule unpack(const Eigen::VectorXd &values,
                     const PulseSchedule &layout) {
  const int nq = layout.n_qubits();
  if (values.size() != static_cast<Eigen::Index>(nq) * layout.n_segments + nq)
    throw InputError("parameter vector length does not match the schedule");
  PulseSchedule s = layout;
  Eigen::Index i = 0;
  for (int q = 0; q < nq; ++q)
    for (int k = 0; k < s.n_segments; ++k)
      s.amplitudes[q][k] = values[i++];
  for (int q = 0; q < nq; ++q)
    s.drive_freq[q] = values[i++];
  return s;
}

Eigen::VectorXd clip(const Eigen::VectorXd &x, const Eigen::VectorXd &lower,
                     const Eigen::VectorXd &upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

ParameterVector clip_to_bounds(ParameterVector v) {
  v.values = clip(v.values, v.lower, v.upper);
  return v;
}

} // namespace qpulse
