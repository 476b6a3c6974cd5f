// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpulse/multistart.hpp"

namespace qpulse {

// ---------------------------------------------------------------------------
// Minimum evolution time

struct MetScanOptions {
  std::vector<double> durations; // ns, strictly increasing
  MultistartOptions multistart;
};

struct MetScanPoint {
  double duration = 0.0;
  int attempted = 0;
  int successes = 0;
  double success_probability = 0.0;
  double best_energy_error = 0.0; // min |E - E0| over the completed runs
  std::optional<RunResult> solution; // first successful run, by seed
};

struct MetScanResult {
  std::vector<MetScanPoint> points;
  int n_starts = 0; // requested per duration
  /// Smallest scanned duration with at least one success.
  std::optional<double> met_estimate;

  std::vector<double> durations() const;
  std::vector<double> success_probabilities() const;
  /// Point at the MET estimate, if any.
  const MetScanPoint *met_point() const;
};

using MetProgress = std::function<void(const MetScanPoint &)>;

/// Multistart at every duration of the grid. Throws InputError unless the
/// grid is strictly increasing and positive.
MetScanResult met_scan(const CtrlProblem &problem, const OptimizerConfig &cfg,
                       const MetScanOptions &opts,
                       const MetProgress &progress = {});

// ---------------------------------------------------------------------------
// Bang-bang certificate

struct TimeInterval {
  int qubit = 0;
  double start = 0.0; // ns
  double end = 0.0;
};

struct CertificateOptions {
  /// Samples with |phi| <= epsilon * max|phi| are excluded from the sign
  /// test (root neighbourhoods).
  double epsilon = 1e-4;
  /// |c| >= (1 - saturation_tol) * amp_bound counts as saturated.
  double saturation_tol = 1e-3;
};

struct BangBangCertificate {
  SwitchingTrace trace;
  std::vector<double> sign_agreement; // per qubit, fraction of tested samples
  double sign_agreement_total = 0.0;
  int tested_samples = 0;
  std::vector<double> saturation;     // per qubit, fraction of segments
  double saturation_total = 0.0;
  int pulse_flips = 0;
  /// Largest distance from a pulse sign flip to the nearest phi zero
  /// crossing of the same qubit; infinite if a flip has no crossing.
  double max_flip_offset = 0.0; // ns
  double segment_width = 0.0;   // ns
  /// Maximal runs of tested samples where sign(Omega) != sign(phi).
  std::vector<TimeInterval> violations;
};

/// Switching-function test of the maximum condition: an optimal amplitude
/// sits at the bound whose sign matches phi_q(t) wherever phi_q is not
/// negligible. The costate terminal condition follows `cfg`.
BangBangCertificate bang_bang_certificate(const ControlSystem &sys,
                                          const PulseSchedule &s,
                                          const Observable &obs,
                                          const ObjectiveConfig &cfg,
                                          int n_trotter, const CVector &psi0,
                                          const CertificateOptions &opts = {});

/// Certificate from an already computed switching trace.
BangBangCertificate certify_trace(const SwitchingTrace &trace,
                                  const PulseSchedule &s,
                                  const CertificateOptions &opts = {});

// ---------------------------------------------------------------------------
// Second-order Dyson analysis
//
// All amplitudes refer to the labelled dressed basis, in which the static
// device Hamiltonian is diagonal, and to the interaction picture.

struct DysonReport {
  std::string initial;
  std::string final;
  cplx first_order;                         // A^(1)
  std::map<std::string, cplx> channels;     // A_{i->m->f} keyed by m
  cplx second_order;                        // A^(2) from the operator route
  double first_order_probability = 0.0;     // |A^(1)|^2
  double second_order_probability = 0.0;    // |A^(2)|^2
  int n_quad = 0;                           // subintervals per segment

  cplx channel_sum() const;
  /// Channels by decreasing |A_m|.
  std::vector<std::string> ranked_channels() const;
};

/// A^(1), every channel A_{i->m->f} and A^(2) for the schedule, by
/// composite trapezoid quadrature on a grid with n_quad subintervals per
/// segment (segment edges are grid points, so the integrands are smooth
/// on every subinterval).
DysonReport dyson_amplitudes(const ControlSystem &sys, const PulseSchedule &s,
                             const std::string &initial,
                             const std::string &final, int n_quad = 512);

/// First- and second-order Dyson operators, dressed coordinates.
struct DysonOperators {
  CMatrix first;  // U^(1)
  CMatrix second; // U^(2)
};

DysonOperators dyson_operators(const ControlSystem &sys, const PulseSchedule &s,
                               int n_quad = 512);

struct SecondOrderState {
  CVector state;            // (I + U1 + U2) psi0, dressed, unnormalized
  CVector exact;            // exact propagator, dressed
  double fidelity = 0.0;    // |<exact|state>|^2 / ||state||^2
  double infidelity = 0.0;
};

/// `psi0` in bare coordinates.
SecondOrderState second_order_state(const ControlSystem &sys,
                                    const PulseSchedule &s, const CVector &psi0,
                                    int n_trotter = 1000, int n_quad = 512);

struct Interference {
  double coherent = 0.0;   // |A1 + A2|^2
  double incoherent = 0.0; // |A1|^2 + |A2|^2
  bool constructive = false;
  double margin = 0.0;     // coherent - incoherent
};

/// Throws InputError when either channel is missing from the report.
Interference interference_test(const DysonReport &report,
                               const std::string &m1, const std::string &m2);

// ---------------------------------------------------------------------------
// Population traces

struct PopulationSeries {
  std::string name;
  std::vector<double> times;      // ns
  std::vector<double> raw;        // |<label|psi>|^2
  std::vector<double> normalized; // raw / computational population
};

/// Raw and computational-subspace-normalized population of `label`.
/// The trace must record every computational label and `label`.
PopulationSeries population_series(const std::string &name,
                                   const EvolutionTrace &trace,
                                   const std::string &label,
                                   int n_transmons);

/// Computational-basis populations of the exact ground state.
std::map<std::string, double> target_populations(const PauliHamiltonian &h);

/// First time at which `values` comes within `tol` of `target`.
std::optional<double> first_reach_time(const std::vector<double> &times,
                                       const std::vector<double> &values,
                                       double target, double tol);

} // namespace qpulse
