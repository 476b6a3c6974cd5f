// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpulse {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default cap on levels^n_transmons.
inline constexpr std::size_t kDefaultMaxDimension = 1024;

/// Which states count as the computational subspace: bare number states
/// or the dressed eigenstates adiabatically labelled by them.
enum class Frame { bare, dressed };

Frame parse_frame(const std::string &name);
std::string to_string(Frame frame);

struct Coupling {
  int p = 0;
  int q = 0;
  double g = 0.0; // GHz
};

/// Coupled transmon device. Frequencies are ordinary frequencies in GHz
/// (omega/2pi); every Hamiltonian built from it carries the 2pi so that
/// energies are in rad/ns.
struct DeviceSpec {
  int n_transmons = 0;
  int levels = 2;
  std::vector<double> omega;
  std::vector<double> delta;
  std::vector<Coupling> couplings;

  /// Throws InputError when an invariant is violated.
  void validate() const;

  /// levels^n_transmons; throws CapacityError above `cap`.
  std::size_t dimension(std::size_t cap = kDefaultMaxDimension) const;

  DeviceSpec with_levels(int new_levels) const;
};

/// Two-transmon reference device, GHz units.
DeviceSpec reference_device(int levels);

// Basis labels. The basis is little-endian: transmon 0 varies fastest.
// A label is written as one digit per transmon, transmon 0 first, so
// "01" means transmon 0 in |0> and transmon 1 in |1>.

std::vector<int> digits_of(std::size_t index, int n_transmons, int levels);
std::size_t index_of(const std::vector<int> &digits, int levels);
std::string label_of(std::size_t index, int n_transmons, int levels);
/// Throws InputError on a malformed label or a digit >= levels.
std::size_t index_of_label(const std::string &label, int n_transmons,
                           int levels);
bool is_computational(std::size_t index, int n_transmons, int levels);

/// Lowering operator a_q on the full product space (bare basis).
CMatrix lowering_operator(const DeviceSpec &spec, int q);

/// Static device Hamiltonian in rad/ns, bare product basis.
CMatrix build_device_hamiltonian(const DeviceSpec &spec,
                                 std::size_t cap = kDefaultMaxDimension);

/// Eigendecomposition of the device Hamiltonian with every bare label
/// assigned the eigenvector it overlaps most.
struct DressedFrame {
  RVector eigenvalues;  // rad/ns, solver order (ascending)
  CMatrix eigenvectors; // columns, solver order
  /// bare_to_dressed[b] = column of `eigenvectors` labelled by bare state b.
  std::vector<int> bare_to_dressed;

  /// Energy of the dressed state carrying bare label b.
  RVector labelled_energies() const;
  /// Column b is the dressed state labelled b, phased so that its overlap
  /// with bare state b is real and positive.
  CMatrix labelled_vectors() const;
};

/// Throws DegeneracyError when a label's two best overlaps tie within
/// 1e-9, or when two labels claim the same eigenvector.
DressedFrame dress(const DeviceSpec &spec,
                   std::size_t cap = kDefaultMaxDimension);

/// Weighted Pauli words acting on the two-level computational space.
/// Character i of a word acts on transmon i.
class PauliHamiltonian {
public:
  PauliHamiltonian() = default;
  explicit PauliHamiltonian(int n_qubits) : n_qubits_(n_qubits) {}

  /// Duplicate words are merged by summing coefficients.
  void add_term(const std::string &word, double coefficient);

  int n_qubits() const { return n_qubits_; }
  const std::map<std::string, double> &terms() const { return terms_; }

  /// Dense 2^n x 2^n matrix, little-endian like the qudit basis.
  CMatrix matrix() const;

  std::map<std::string, std::string> metadata;

private:
  int n_qubits_ = 0;
  std::map<std::string, double> terms_;
};

/// Projector onto the computational subspace of `frame`, bare coordinates.
CMatrix computational_projector(const DeviceSpec &spec, Frame frame);

/// P^dagger H_mol P on the full qudit space, bare coordinates. The result
/// annihilates every state outside the computational subspace of `frame`.
CMatrix embed_molecular_hamiltonian(const PauliHamiltonian &h,
                                    const DeviceSpec &spec, Frame frame);

/// Basis state `label` of `frame`, bare coordinates.
CVector basis_state(const DeviceSpec &spec, Frame frame,
                    const std::string &label);

/// Exact minimum eigenvalue and eigenvector of the 2^n Pauli matrix.
struct GroundState {
  double energy = 0.0;
  CVector vector;
};
GroundState exact_ground_state(const PauliHamiltonian &h);

} // namespace qpulse
