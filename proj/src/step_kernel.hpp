// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

// Fixed-step propagation kernel shared by the propagator, the adjoint
// gradient and the Dyson analysis. Works in labelled dressed coordinates,
// where H_{I,C}(t) = D(t) K(t) D(t)^dagger with D(t) = diag(e^{i E t}) and
//   K(t) = sum_q 2pi Omega_q(t) (e^{i 2pi nu_q t} A_q + e^{-i 2pi nu_q t} A_q^dagger).
// Each step applies D exp(-i K dt) D^dagger with the exponential summed as
// a Taylor series truncated below 1e-18 relative to the vector norm.
//
// The kernel is a template over the state dimension so the hot loops of
// the optimizer run on fixed-size Eigen types for the common truncations.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qpulse/errors.hpp"
#include "qpulse/propagator.hpp"

namespace qpulse::detail {

/// Number of Taylor terms m such that b^{m+1}/(m+1)! <= 1e-18.
int taylor_order(double norm_bound);

/// One step never exceeds this generator 1-norm; longer steps are split.
inline constexpr double kMaxStepNorm = 0.5;

/// Dressed-coordinate interaction-picture phase diag(e^{i E t}).
CVector interaction_phase(const ControlSystem &sys, double t);

/// Column j holds interaction_phase at the midpoint of Trotter step j.
CMatrix midpoint_phases(const ControlSystem &sys, const TrotterGrid &grid);

/// Micro steps per Trotter step: enough that no micro step's generator
/// norm exceeds kMaxStepNorm for any amplitude within the bound.
int substeps_for(const ControlSystem &sys, const PulseSchedule &s,
                 const TrotterGrid &grid);

template <int D> class BasicStepKernel {
public:
  using Vec = Eigen::Matrix<cplx, D, 1>;
  using Mat = Eigen::Matrix<cplx, D, D>;

  /// `phases` (from midpoint_phases on the same grid) may be shared across
  /// kernels; when null the kernel builds its own.
  BasicStepKernel(const ControlSystem &sys, const PulseSchedule &s,
                  int n_trotter, const CMatrix *phases = nullptr)
      : sys_(sys), schedule_(s), grid_(make_grid(s, n_trotter)) {
    if (s.n_qubits() != sys.n_transmons())
      throw InputError("schedule drives " + std::to_string(s.n_qubits()) +
                       " qubits but the device has " +
                       std::to_string(sys.n_transmons()) + " transmons");
    if (phases == nullptr) {
      own_phases_ = midpoint_phases(sys, grid_);
      phases = &own_phases_;
    } else if (phases->cols() != grid_.n_steps || phases->rows() != sys.dim()) {
      throw InputError("phase table does not match the Trotter grid");
    }
    phases_ = phases;
    substeps_ = substeps_for(sys, s, grid_);
    micro_dt_ = grid_.dt / substeps_;
    const auto d = sys.dim();
    for (int q = 0; q < s.n_qubits(); ++q) {
      lowering_.push_back(sys.lowering(q));
      raising_.push_back(sys.raising(q));
    }
    generator_.setZero(d, d);
    phase_.setZero(d);
    scratch_.setZero(d);
    term_.setZero(d);
    drive_phase_.resize(s.n_qubits());
    amplitude_.resize(s.n_qubits());
  }

  const TrotterGrid &grid() const { return grid_; }
  int substeps() const { return substeps_; }
  int n_micro() const { return grid_.n_steps * substeps_; }
  double micro_dt() const { return micro_dt_; }
  Eigen::Index dim() const { return sys_.dim(); }

  /// Assembles the generator of micro step m (belongs to Trotter step
  /// m / substeps and uses that step's midpoint).
  void prepare(int m) {
    const int j = m / substeps_;
    midpoint_ = grid_.midpoint(j);
    segment_ = schedule_.segment_at(midpoint_);
    phase_ = phases_->col(j);
    generator_.setZero();
    double bound = 0.0;
    for (int q = 0; q < schedule_.n_qubits(); ++q) {
      const double omega = schedule_.amplitudes[q][segment_];
      amplitude_[q] = omega;
      drive_phase_[q] =
          std::polar(1.0, kTwoPi * schedule_.drive_freq[q] * midpoint_);
      if (omega == 0.0)
        continue;
      const cplx c = kTwoPi * omega * drive_phase_[q];
      generator_ += c * lowering_[q] + std::conj(c) * raising_[q];
      bound += kTwoPi * std::abs(omega) * sys_.drive_norm_bound(q);
    }
    order_ = taylor_order(bound * micro_dt_);
  }

  /// x <- D exp(-/+ i K dt) D^dagger x for the prepared step.
  template <typename V> void apply(V &x, bool adjoint) const {
    scratch_ = phase_.conjugate().cwiseProduct(x);
    taylor(scratch_, cplx(0.0, adjoint ? micro_dt_ : -micro_dt_));
    x = phase_.cwiseProduct(scratch_);
  }

  /// Taylor polynomial of exp(coef * K) applied to y, `order` terms.
  void taylor(Vec &y, cplx coef) const {
    Vec term = y;
    for (int k = 1; k <= order_; ++k) {
      term_.noalias() = generator_ * term;
      term = (coef / static_cast<double>(k)) * term_;
      y += term;
    }
  }

  // State of the prepared step.
  int order() const { return order_; }
  double midpoint() const { return midpoint_; }
  const Mat &generator() const { return generator_; }
  const Vec &phase() const { return phase_; }
  cplx drive_phase(int q) const { return drive_phase_[q]; }
  double amplitude(int q) const { return amplitude_[q]; }
  int segment() const { return segment_; }
  const Mat &lowering(int q) const { return lowering_[q]; }
  const Mat &raising(int q) const { return raising_[q]; }

private:
  const ControlSystem &sys_;
  const PulseSchedule &schedule_;
  TrotterGrid grid_;
  CMatrix own_phases_;
  const CMatrix *phases_ = nullptr;
  int substeps_ = 1;
  double micro_dt_ = 0.0;
  std::vector<Mat> lowering_;
  std::vector<Mat> raising_;

  int order_ = 0;
  int segment_ = 0;
  double midpoint_ = 0.0;
  Mat generator_;
  Vec phase_;
  std::vector<cplx> drive_phase_;
  std::vector<double> amplitude_;
  mutable Vec scratch_;
  mutable Vec term_;
};

using StepKernel = BasicStepKernel<Eigen::Dynamic>;

/// Calls f(std::integral_constant<int, D>) with D the fixed dimension
/// matching `dim`, or Eigen::Dynamic for other sizes.
template <typename F> decltype(auto) dispatch_dimension(Eigen::Index dim, F &&f) {
  switch (dim) {
  case 4:
    return f(std::integral_constant<int, 4>{});
  case 9:
    return f(std::integral_constant<int, 9>{});
  case 16:
    return f(std::integral_constant<int, 16>{});
  default:
    return f(std::integral_constant<int, Eigen::Dynamic>{});
  }
}

} // namespace qpulse::detail
