// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/propagator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpulse/errors.hpp"
#include "step_kernel.hpp"

namespace qpulse {

namespace {

double max_column_sum(const CMatrix &m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

ControlSystem::ControlSystem(const DeviceSpec &spec, std::size_t cap)
    : spec_(spec) {
  spec_.validate();
  const DressedFrame frame = dress(spec_, cap);
  energies_ = frame.labelled_energies();
  vectors_ = frame.labelled_vectors();
  for (int q = 0; q < spec_.n_transmons; ++q) {
    CMatrix a = vectors_.adjoint() * lowering_operator(spec_, q) * vectors_;
    // Entries that are pure round-off would only add work.
    a = a.unaryExpr([](cplx z) { return std::abs(z) < 1e-15 ? cplx{} : z; });
    raising_.push_back(a.adjoint());
    drive_norm_.push_back(max_column_sum(a) + max_column_sum(a.adjoint()));
    lowering_.push_back(std::move(a));
  }
}

CVector ControlSystem::to_dressed(const CVector &bare) const {
  return vectors_.adjoint() * bare;
}

CVector ControlSystem::to_bare(const CVector &dressed) const {
  return vectors_ * dressed;
}

CMatrix ControlSystem::operator_to_dressed(const CMatrix &bare) const {
  return vectors_.adjoint() * bare * vectors_;
}

CMatrix ControlSystem::drive_operator_at(int q, double nu, double t) const {
  const CVector phase = detail::interaction_phase(*this, t);
  const cplx carrier = std::polar(1.0, kTwoPi * nu * t);
  const CMatrix k = carrier * lowering_[q] + std::conj(carrier) * raising_[q];
  const CMatrix rotated = phase.asDiagonal() * k * phase.conjugate().asDiagonal();
  return vectors_ * rotated * vectors_.adjoint();
}

CMatrix ControlSystem::control_hamiltonian_at(const PulseSchedule &s,
                                              double t) const {
  CMatrix h = CMatrix::Zero(dim(), dim());
  for (int q = 0; q < s.n_qubits(); ++q) {
    const double omega = sample_at(s, q, t);
    if (omega != 0.0)
      h += kTwoPi * omega * drive_operator_at(q, s.drive_freq[q], t);
  }
  return h;
}

TrotterGrid make_grid(const PulseSchedule &s, int n_trotter) {
  if (n_trotter < 1)
    throw InputError("n_trotter must be at least 1");
  return {n_trotter, s.duration / n_trotter};
}

namespace detail {

int taylor_order(double norm_bound) {
  int m = 1;
  double term = norm_bound; // b^m / m!
  while (m < 40) {
    const double next = term * norm_bound / (m + 1);
    if (next <= 1e-18)
      break;
    term = next;
    ++m;
  }
  return m;
}

CVector interaction_phase(const ControlSystem &sys, double t) {
  CVector phase(sys.dim());
  for (Eigen::Index i = 0; i < sys.dim(); ++i)
    phase[i] = std::polar(1.0, sys.energies()[i] * t);
  return phase;
}

CMatrix midpoint_phases(const ControlSystem &sys, const TrotterGrid &grid) {
  CMatrix out(sys.dim(), grid.n_steps);
  for (int j = 0; j < grid.n_steps; ++j)
    out.col(j) = interaction_phase(sys, grid.midpoint(j));
  return out;
}

int substeps_for(const ControlSystem &sys, const PulseSchedule &s,
                 const TrotterGrid &grid) {
  double worst = 0.0;
  for (int q = 0; q < s.n_qubits(); ++q) {
    double peak = s.amp_bound;
    for (double c : s.amplitudes[q])
      peak = std::max(peak, std::abs(c));
    worst += kTwoPi * peak * sys.drive_norm_bound(q);
  }
  return std::max(1, static_cast<int>(std::ceil(worst * grid.dt / kMaxStepNorm)));
}

} // namespace detail

std::vector<std::string> all_labels(const DeviceSpec &spec) {
  std::vector<std::string> out;
  const std::size_t dim = spec.dimension();
  for (std::size_t i = 0; i < dim; ++i)
    out.push_back(label_of(i, spec.n_transmons, spec.levels));
  return out;
}

std::vector<double> populations(const ControlSystem &sys, const CVector &psi,
                                const std::vector<std::string> &labels,
                                Frame frame) {
  const CVector coords = frame == Frame::dressed ? sys.to_dressed(psi) : psi;
  std::vector<double> out;
  out.reserve(labels.size());
  for (const auto &label : labels)
    out.push_back(std::norm(coords[index_of_label(
        label, sys.spec().n_transmons, sys.spec().levels)]));
  return out;
}

namespace {

void check_normalized(const CVector &psi, Eigen::Index dim) {
  if (psi.size() != dim)
    throw InputError("state has dimension " + std::to_string(psi.size()) +
                     ", device needs " + std::to_string(dim));
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw InputError("initial state is not normalized");
}

} // namespace

EvolutionResult evolve(const ControlSystem &sys, const PulseSchedule &s,
                       const CVector &psi0, int n_trotter,
                       const std::vector<std::string> &record, Frame frame) {
  check_normalized(psi0, sys.dim());
  s.validate(sys.spec().omega);
  detail::StepKernel kernel(sys, s, n_trotter);
  EvolutionResult out;
  out.trace.labels = record;
  out.trace.frame = frame;
  out.trace.populations.assign(record.size(), {});

  CVector x = sys.to_dressed(psi0);
  auto snapshot = [&](double t) {
    if (record.empty())
      return;
    out.trace.times.push_back(t);
    const auto pops = populations(sys, sys.to_bare(x), record, frame);
    for (std::size_t i = 0; i < pops.size(); ++i)
      out.trace.populations[i].push_back(pops[i]);
  };
  snapshot(0.0);
  for (int m = 0; m < kernel.n_micro(); ++m) {
    kernel.prepare(m);
    kernel.apply(x, false);
    if ((m + 1) % kernel.substeps() == 0)
      snapshot(kernel.grid().time((m + 1) / kernel.substeps()));
  }
  out.final_state = sys.to_bare(x);
  return out;
}

std::vector<CVector> forward_trajectory(const ControlSystem &sys,
                                        const PulseSchedule &s,
                                        const CVector &psi0, int n_trotter) {
  check_normalized(psi0, sys.dim());
  s.validate(sys.spec().omega);
  detail::StepKernel kernel(sys, s, n_trotter);
  std::vector<CVector> out;
  out.reserve(kernel.grid().n_steps + 1);
  CVector x = sys.to_dressed(psi0);
  out.push_back(psi0);
  for (int m = 0; m < kernel.n_micro(); ++m) {
    kernel.prepare(m);
    kernel.apply(x, false);
    if ((m + 1) % kernel.substeps() == 0)
      out.push_back(sys.to_bare(x));
  }
  return out;
}

void apply_step(const ControlSystem &sys, const PulseSchedule &s,
                const TrotterGrid &grid, int j, CVector &psi, bool adjoint) {
  detail::StepKernel kernel(sys, s, grid.n_steps);
  CVector x = sys.to_dressed(psi);
  const int first = j * kernel.substeps();
  for (int r = 0; r < kernel.substeps(); ++r) {
    const int m = adjoint ? first + kernel.substeps() - 1 - r : first + r;
    kernel.prepare(m);
    kernel.apply(x, adjoint);
  }
  psi = sys.to_bare(x);
}

CMatrix reference_step_unitary(const ControlSystem &sys,
                               const PulseSchedule &s, const TrotterGrid &grid,
                               int j) {
  const CMatrix h = sys.control_hamiltonian_at(s, grid.midpoint(j));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases[i] = std::polar(1.0, -solver.eigenvalues()[i] * grid.dt);
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

Projection project_and_normalize(const DeviceSpec &spec, const CVector &psi,
                                 Frame frame) {
  const std::size_t n_comp = std::size_t{1} << spec.n_transmons;
  CMatrix vectors;
  if (frame == Frame::dressed)
    vectors = dress(spec).labelled_vectors();
  CVector comp(n_comp);
  for (std::size_t c = 0; c < n_comp; ++c) {
    std::vector<int> digits(spec.n_transmons);
    for (int q = 0; q < spec.n_transmons; ++q)
      digits[q] = static_cast<int>((c >> q) & 1U);
    const std::size_t b = index_of(digits, spec.levels);
    comp[c] = frame == Frame::bare ? psi[b] : vectors.col(b).dot(psi);
  }
  const double weight = comp.squaredNorm();
  if (weight < 1e-12)
    throw SingularProjectionError(
        "state has no weight in the computational subspace");
  return {comp / std::sqrt(weight), std::max(0.0, 1.0 - weight / psi.squaredNorm())};
}

} // namespace qpulse
