// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include <Eigen/Eigenvalues>

#include "qpulse/errors.hpp"

namespace qpulse {

Frame parse_frame(const std::string &name) {
  if (name == "bare")
    return Frame::bare;
  if (name == "dressed")
    return Frame::dressed;
  throw InputError("unknown frame '" + name + "' (expected bare or dressed)");
}

std::string to_string(Frame frame) {
  return frame == Frame::bare ? "bare" : "dressed";
}

void DeviceSpec::validate() const {
  if (n_transmons < 1)
    throw InputError("n_transmons must be positive");
  if (levels < 2)
    throw InputError("levels must be at least 2");
  if (omega.size() != static_cast<std::size_t>(n_transmons) ||
      delta.size() != static_cast<std::size_t>(n_transmons))
    throw InputError("omega and delta need one entry per transmon");
  std::set<std::pair<int, int>> seen;
  for (const auto &c : couplings) {
    if (c.p < 0 || c.q >= n_transmons || c.p >= c.q)
      throw InputError("coupling (" + std::to_string(c.p) + ", " +
                       std::to_string(c.q) +
                       ") needs 0 <= p < q < n_transmons");
    if (!seen.insert({c.p, c.q}).second)
      throw InputError("duplicate coupling (" + std::to_string(c.p) + ", " +
                       std::to_string(c.q) + ")");
    if (!std::isfinite(c.g))
      throw InputError("coupling strength must be finite");
  }
}

std::size_t DeviceSpec::dimension(std::size_t cap) const {
  std::size_t dim = 1;
  for (int i = 0; i < n_transmons; ++i) {
    dim *= static_cast<std::size_t>(levels);
    if (dim > cap)
      throw CapacityError(dim, cap);
  }
  return dim;
}

DeviceSpec DeviceSpec::with_levels(int new_levels) const {
  DeviceSpec out = *this;
  out.levels = new_levels;
  return out;
}

DeviceSpec reference_device(int levels) {
  DeviceSpec spec;
  spec.n_transmons = 2;
  spec.levels = levels;
  spec.omega = {4.8080, 4.8333};
  spec.delta = {0.3102, 0.2916};
  spec.couplings = {{0, 1, 0.01831}};
  return spec;
}

std::vector<int> digits_of(std::size_t index, int n_transmons, int levels) {
  std::vector<int> digits(n_transmons);
  for (int q = 0; q < n_transmons; ++q) {
    digits[q] = static_cast<int>(index % levels);
    index /= levels;
  }
  return digits;
}

std::size_t index_of(const std::vector<int> &digits, int levels) {
  std::size_t index = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it)
    index = index * levels + static_cast<std::size_t>(*it);
  return index;
}

std::string label_of(std::size_t index, int n_transmons, int levels) {
  std::string out;
  for (int d : digits_of(index, n_transmons, levels))
    out += static_cast<char>('0' + d);
  return out;
}

std::size_t index_of_label(const std::string &label, int n_transmons,
                           int levels) {
  if (label.size() != static_cast<std::size_t>(n_transmons))
    throw InputError("label '" + label + "' needs one digit per transmon");
  std::vector<int> digits;
  for (char ch : label) {
    const int d = ch - '0';
    if (d < 0 || d >= levels || d > 9)
      throw InputError("label '" + label + "' has a level outside [0, " +
                       std::to_string(levels - 1) + "]");
    digits.push_back(d);
  }
  return index_of(digits, levels);
}

bool is_computational(std::size_t index, int n_transmons, int levels) {
  for (int d : digits_of(index, n_transmons, levels))
    if (d > 1)
      return false;
  return true;
}

CMatrix lowering_operator(const DeviceSpec &spec, int q) {
  const std::size_t dim = spec.dimension();
  CMatrix a = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    auto digits = digits_of(col, spec.n_transmons, spec.levels);
    const int n = digits[q];
    if (n == 0)
      continue;
    digits[q] = n - 1;
    a(index_of(digits, spec.levels), col) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

CMatrix build_device_hamiltonian(const DeviceSpec &spec, std::size_t cap) {
  spec.validate();
  const std::size_t dim = spec.dimension(cap);
  CMatrix h = CMatrix::Zero(dim, dim);
  // Diagonal part: omega n - (delta/2) n (n - 1) per transmon.
  for (std::size_t i = 0; i < dim; ++i) {
    const auto digits = digits_of(i, spec.n_transmons, spec.levels);
    double e = 0.0;
    for (int q = 0; q < spec.n_transmons; ++q) {
      const double n = digits[q];
      e += spec.omega[q] * n - 0.5 * spec.delta[q] * n * (n - 1.0);
    }
    h(i, i) = kTwoPi * e;
  }
  for (const auto &c : spec.couplings) {
    const CMatrix ap = lowering_operator(spec, c.p);
    const CMatrix aq = lowering_operator(spec, c.q);
    h += kTwoPi * c.g * (ap.adjoint() * aq + aq.adjoint() * ap);
  }
  return h;
}

RVector DressedFrame::labelled_energies() const {
  RVector out(eigenvalues.size());
  for (std::size_t b = 0; b < bare_to_dressed.size(); ++b)
    out[b] = eigenvalues[bare_to_dressed[b]];
  return out;
}

CMatrix DressedFrame::labelled_vectors() const {
  const auto dim = eigenvectors.rows();
  CMatrix out(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    CVector v = eigenvectors.col(bare_to_dressed[b]);
    const cplx overlap = v[b];
    if (std::abs(overlap) > 0.0)
      v *= std::conj(overlap) / std::abs(overlap);
    out.col(b) = v;
  }
  return out;
}

DressedFrame dress(const DeviceSpec &spec, std::size_t cap) {
  const CMatrix h = build_device_hamiltonian(spec, cap);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  DressedFrame frame;
  frame.eigenvalues = solver.eigenvalues();
  frame.eigenvectors = solver.eigenvectors();
  const auto dim = h.rows();
  frame.bare_to_dressed.assign(dim, -1);
  std::vector<int> claimed(dim, -1);
  for (Eigen::Index b = 0; b < dim; ++b) {
    int best = -1;
    double best_w = -1.0, second_w = -1.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double w = std::norm(frame.eigenvectors(b, k));
      if (w > best_w) {
        second_w = best_w;
        best_w = w;
        best = static_cast<int>(k);
      } else if (w > second_w) {
        second_w = w;
      }
    }
    const std::string name = label_of(b, spec.n_transmons, spec.levels);
    if (best_w - second_w < 1e-9)
      throw DegeneracyError("bare state |" + name +
                            "> overlaps two dressed states equally");
    if (claimed[best] >= 0)
      throw DegeneracyError(
          "bare states |" + label_of(claimed[best], spec.n_transmons,
                                     spec.levels) +
          "> and |" + name + "> map to the same dressed state");
    claimed[best] = static_cast<int>(b);
    frame.bare_to_dressed[b] = best;
  }
  return frame;
}

void PauliHamiltonian::add_term(const std::string &word, double coefficient) {
  if (n_qubits_ == 0)
    n_qubits_ = static_cast<int>(word.size());
  if (word.size() != static_cast<std::size_t>(n_qubits_))
    throw InputError("Pauli word '" + word + "' has length " +
                     std::to_string(word.size()) + ", expected " +
                     std::to_string(n_qubits_));
  for (char ch : word)
    if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
      throw InputError("Pauli word '" + word + "' has a letter outside IXYZ");
  if (!std::isfinite(coefficient))
    throw InputError("coefficient of '" + word + "' is not finite");
  terms_[word] += coefficient;
}

CMatrix PauliHamiltonian::matrix() const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  CMatrix h = CMatrix::Zero(dim, dim);
  const cplx I(0.0, 1.0);
  for (const auto &[word, coefficient] : terms_) {
    // Each Pauli word is a signed permutation: column c has one entry.
    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t row = col;
      cplx value = coefficient;
      for (int q = 0; q < n_qubits_; ++q) {
        const bool bit = (col >> q) & 1U;
        switch (word[q]) {
        case 'X':
          row ^= std::size_t{1} << q;
          break;
        case 'Y':
          row ^= std::size_t{1} << q;
          value *= bit ? -I : I;
          break;
        case 'Z':
          if (bit)
            value = -value;
          break;
        default:
          break;
        }
      }
      h(row, col) += value;
    }
  }
  return h;
}

namespace {

// Columns: the full-space image of each computational basis state, in
// the little-endian order of the 2^n Pauli matrix.
CMatrix computational_isometry(const DeviceSpec &spec, Frame frame) {
  const std::size_t dim = spec.dimension();
  const std::size_t n_comp = std::size_t{1} << spec.n_transmons;
  CMatrix iso = CMatrix::Zero(dim, n_comp);
  CMatrix vectors;
  if (frame == Frame::dressed)
    vectors = dress(spec).labelled_vectors();
  for (std::size_t c = 0; c < n_comp; ++c) {
    std::vector<int> digits(spec.n_transmons);
    for (int q = 0; q < spec.n_transmons; ++q)
      digits[q] = static_cast<int>((c >> q) & 1U);
    const std::size_t b = index_of(digits, spec.levels);
    if (frame == Frame::bare)
      iso(b, c) = 1.0;
    else
      iso.col(c) = vectors.col(b);
  }
  return iso;
}

} // namespace

CMatrix computational_projector(const DeviceSpec &spec, Frame frame) {
  spec.validate();
  const CMatrix iso = computational_isometry(spec, frame);
  return iso * iso.adjoint();
}

CMatrix embed_molecular_hamiltonian(const PauliHamiltonian &h,
                                    const DeviceSpec &spec, Frame frame) {
  spec.validate();
  if (h.n_qubits() != spec.n_transmons)
    throw InputError("Hamiltonian acts on " + std::to_string(h.n_qubits()) +
                     " qubits but the device has " +
                     std::to_string(spec.n_transmons) + " transmons");
  const CMatrix iso = computational_isometry(spec, frame);
  return iso * h.matrix() * iso.adjoint();
}

CVector basis_state(const DeviceSpec &spec, Frame frame,
                    const std::string &label) {
  spec.validate();
  const std::size_t b =
      index_of_label(label, spec.n_transmons, spec.levels);
  if (frame == Frame::dressed)
    return dress(spec).labelled_vectors().col(b);
  CVector v = CVector::Zero(spec.dimension());
  v[b] = 1.0;
  return v;
}

GroundState exact_ground_state(const PauliHamiltonian &h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  return {solver.eigenvalues()[0], solver.eigenvectors().col(0)};
}

} // namespace qpulse
