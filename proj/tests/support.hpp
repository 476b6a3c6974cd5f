// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures and independent oracles for the unit tests.

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qpulse/io.hpp"

namespace qpulse::test {

inline std::filesystem::path data_dir() { return QPULSE_DATA_DIR; }

inline PauliHamiltonian h2() {
  return read_hamiltonian_file(data_dir() / "h2_1.5A_sto3g_parity_z2.ham");
}

inline CVector random_state(std::mt19937_64 &rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i)
    v[i] = cplx(n(rng), n(rng));
  return v.normalized();
}

inline PulseSchedule constant_schedule(double amp, double duration, int n_seg,
                                       const std::vector<double> &nu) {
  PulseSchedule s;
  s.duration = duration;
  s.n_segments = n_seg;
  s.drive_freq = nu;
  s.amplitudes.assign(nu.size(), std::vector<double>(n_seg, amp));
  s.amp_bound = 0.020;
  s.detuning_bound = 1.0;
  return s;
}

// Oracle: single-mode operators combined by Kronecker products, with the
// little-endian ordering (transmon 0 fastest) built as B_{n-1} x ... x B_0.
inline CMatrix single_lowering(int levels) {
  CMatrix a = CMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n)
    a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline CMatrix embed(const CMatrix &op, int q, int n_transmons, int levels) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = n_transmons - 1; k >= 0; --k) {
    const CMatrix f = k == q ? op : CMatrix::Identity(levels, levels);
    CMatrix next = Eigen::kroneckerProduct(out, f).eval();
    out = next;
  }
  return out;
}

inline CMatrix oracle_device_hamiltonian(const DeviceSpec &d) {
  const Eigen::Index dim = static_cast<Eigen::Index>(
      std::pow(d.levels, d.n_transmons));
  CMatrix h = CMatrix::Zero(dim, dim);
  const CMatrix a1 = single_lowering(d.levels);
  const CMatrix n1 = a1.adjoint() * a1;
  const CMatrix id = CMatrix::Identity(d.levels, d.levels);
  for (int q = 0; q < d.n_transmons; ++q) {
    const CMatrix nq = embed(n1, q, d.n_transmons, d.levels);
    h += kTwoPi * d.omega[q] * nq -
         kTwoPi * 0.5 * d.delta[q] *
             embed(n1 * (n1 - id), q, d.n_transmons, d.levels);
  }
  for (const auto &c : d.couplings) {
    const CMatrix ap = embed(a1, c.p, d.n_transmons, d.levels);
    const CMatrix aq = embed(a1, c.q, d.n_transmons, d.levels);
    h += kTwoPi * c.g * (ap.adjoint() * aq + aq.adjoint() * ap);
  }
  return h;
}

// Oracle: H_{I,C}(t) by dense matrix exponentials of the device
// Hamiltonian rather than the dressed phase bookkeeping.
inline CMatrix oracle_control_hamiltonian(const DeviceSpec &d,
                                          const PulseSchedule &s, double t) {
  const CMatrix hd = oracle_device_hamiltonian(d);
  const cplx i(0.0, 1.0);
  const CMatrix u = (i * t * hd).exp();
  CMatrix hc = CMatrix::Zero(hd.rows(), hd.cols());
  const CMatrix a1 = single_lowering(d.levels);
  for (int q = 0; q < d.n_transmons; ++q) {
    const double omega = sample_at(s, q, t);
    const CMatrix a = embed(a1, q, d.n_transmons, d.levels);
    const cplx ph = std::exp(i * kTwoPi * s.drive_freq[q] * t);
    hc += kTwoPi * omega * (ph * a + std::conj(ph) * a.adjoint());
  }
  return u * hc * u.adjoint();
}

inline double fidelity(const CVector &a, const CVector &b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

} // namespace qpulse::test
