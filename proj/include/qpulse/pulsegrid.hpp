// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qpulse/model.hpp"

namespace qpulse {

/// Piecewise-constant drive on a uniform grid. Amplitudes are Omega/2pi
/// in GHz; drive frequencies nu are ordinary frequencies in GHz.
struct PulseSchedule {
  double duration = 0.0; // ns
  int n_segments = 0;
  std::vector<std::vector<double>> amplitudes; // [qubit][segment]
  std::vector<double> drive_freq;              // [qubit]
  double amp_bound = 0.0;
  double detuning_bound = 0.0;

  int n_qubits() const { return static_cast<int>(drive_freq.size()); }
  double segment_width() const { return duration / n_segments; }

  /// Segment containing t. Right-continuous; t = T maps to the last one.
  int segment_at(double t) const;

  /// Throws InputError unless shapes agree and all bounds hold with
  /// respect to the device frequencies.
  void validate(const std::vector<double> &omega) const;
};

/// Amplitude of qubit q at time t; throws InputError for t outside [0, T].
double sample_at(const PulseSchedule &s, int q, double t);

struct PulseBounds {
  double amp_bound = 0.020;      // GHz, symmetric
  double detuning_bound = 1.0;   // GHz, |nu - omega|
};

/// Amplitudes uniform on [-amp_bound, amp_bound]; drive frequencies
/// uniform within detuning_bound of omega. Deterministic in the seed.
PulseSchedule random_schedule(std::uint64_t seed, const PulseBounds &bounds,
                              const std::vector<double> &omega,
                              int n_segments, double duration);

/// Flat packing used by the optimizer: all amplitudes (qubit-major), then
/// every drive frequency.
struct ParameterVector {
  Eigen::VectorXd values;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

ParameterVector pack(const PulseSchedule &s, const std::vector<double> &omega);

/// Inverse of pack: writes `values` into a copy of `layout`.
PulseSchedule unpack(const Eigen::VectorXd &values,
                     const PulseSchedule &layout);

/// Componentwise projection onto [lower, upper].
ParameterVector clip_to_bounds(ParameterVector v);

Eigen::VectorXd clip(const Eigen::VectorXd &x, const Eigen::VectorXd &lower,
                     const Eigen::VectorXd &upper);

} // namespace qpulse
