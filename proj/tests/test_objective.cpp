// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "qpulse/errors.hpp"
#include "qpulse/objective.hpp"
#include "support.hpp"

using namespace qpulse;
using namespace qpulse::test;

TEST_CASE("HF state energy is the diagonal matrix element") {
  const PauliHamiltonian h = h2();
  for (Frame frame : {Frame::bare, Frame::dressed}) {
    const DeviceSpec d = reference_device(2);
    const Observable obs = make_observable(h, d, frame);
    const EnergyReport r = energy(basis_state(d, frame, "01"), obs, {});
    // 01 is index 2 in the little-endian Pauli matrix.
    CHECK(r.energy == doctest::Approx(h.matrix()(2, 2).real()).epsilon(1e-12));
    CHECK(r.energy ==
          doctest::Approx(std::stod(h.metadata.at("e_hf"))).epsilon(1e-10));
    CHECK(r.leakage_fraction == doctest::Approx(0.0));
  }
}

TEST_CASE("projected normalized energy never drops below the FCI energy") {
  const PauliHamiltonian h = h2();
  const double e0 = exact_ground_state(h).energy;
  const CMatrix hm = h.matrix();
  const double e_max = Eigen::SelfAdjointEigenSolver<CMatrix>(hm).eigenvalues()[3];
  std::mt19937_64 rng(17);
  for (int levels : {2, 3}) {
    for (Frame frame : {Frame::bare, Frame::dressed}) {
      const DeviceSpec d = reference_device(levels);
      const Observable obs = make_observable(h, d, frame);
      for (int k = 0; k < 10000; ++k) {
        const CVector psi = random_state(rng, obs.hamiltonian.rows());
        const EnergyReport r = energy(psi, obs, {});
        REQUIRE(r.energy >= e0 - 1e-12);
        REQUIRE(r.energy <= e_max + 1e-12);
        REQUIRE(r.leakage_fraction >= 0.0);
        REQUIRE(r.leakage_fraction <= 1.0);
      }
    }
  }
}

TEST_CASE("ground state embedded in the dressed frame attains the minimum") {
  const PauliHamiltonian h = h2();
  const GroundState g = exact_ground_state(h);
  const DeviceSpec d = reference_device(3);
  const Observable obs = make_observable(h, d, Frame::dressed);
  const CMatrix v = dress(d).labelled_vectors();
  CVector psi = CVector::Zero(9);
  for (int c = 0; c < 4; ++c) {
    const std::vector<int> digits = {c & 1, (c >> 1) & 1};
    psi += g.vector[c] * v.col(index_of(digits, 3));
  }
  // Add leakage: the normalized energy ignores it.
  psi = 0.8 * psi + 0.6 * v.col(index_of_label("20", 2, 3));
  const EnergyReport r = energy(psi, obs, {});
  CHECK(r.energy == doctest::Approx(g.energy).epsilon(1e-12));
  CHECK(r.leakage_fraction == doctest::Approx(0.36).epsilon(1e-12));
  ObjectiveConfig raw;
  raw.normalize = false;
  CHECK(energy(psi, obs, raw).energy == doctest::Approx(0.64 * g.energy));
}

TEST_CASE("leakage penalty: rate per percentage point above the threshold") {
  ObjectiveConfig c;
  c.penalty_rate = 0.01;
  c.leakage_threshold = 0.10;
  c.penalty_smoothing = 0.0;
  CHECK(leakage_penalty(0.05, c) == 0.0);
  CHECK(leakage_penalty(0.10, c) == 0.0);
  CHECK(leakage_penalty(0.25, c) == doctest::Approx(0.15));
  CHECK(leakage_penalty_slope(0.25, c) == doctest::Approx(1.0));
  CHECK(leakage_penalty_slope(0.05, c) == 0.0);
  CHECK(leakage_penalty(0.99, ObjectiveConfig{}) == 0.0);
  c.penalty_rate = -1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.penalty_rate = 0.0;
  c.leakage_threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("smoothed penalty: zero below threshold, C1, offset by half the width") {
  ObjectiveConfig c;
  c.penalty_rate = 0.01;
  c.leakage_threshold = 0.10;
  c.penalty_smoothing = 0.01;
  CHECK(leakage_penalty(0.10, c) == 0.0);
  CHECK(leakage_penalty_slope(0.10, c) == 0.0);
  CHECK(leakage_penalty(0.25, c) == doctest::Approx(0.15 - 0.005));
  CHECK(leakage_penalty_slope(0.25, c) == doctest::Approx(1.0));
  // Slope is continuous across both ends and matches a central difference.
  const double h = 1e-7;
  for (double x : {0.1001, 0.105, 0.1099, 0.11, 0.1101, 0.3}) {
    const double fd =
        (leakage_penalty(x + h, c) - leakage_penalty(x - h, c)) / (2.0 * h);
    CHECK(leakage_penalty_slope(x, c) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(leakage_penalty_slope(0.11 - 1e-12, c) ==
        doctest::Approx(leakage_penalty_slope(0.11 + 1e-12, c)));
  c.penalty_smoothing = -0.1;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("fully leaked state raises a singular projection error") {
  const DeviceSpec d = reference_device(3);
  const Observable obs = make_observable(h2(), d, Frame::bare);
  CHECK_THROWS_AS(energy(basis_state(d, Frame::bare, "02"), obs, {}),
                  SingularProjectionError);
  ObjectiveConfig raw;
  raw.normalize = false;
  CHECK(energy(basis_state(d, Frame::bare, "02"), obs, raw).energy == 0.0);
}
