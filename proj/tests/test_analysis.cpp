// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "qpulse/analysis.hpp"
#include "qpulse/errors.hpp"
#include "support.hpp"

using namespace qpulse;
using namespace qpulse::test;

namespace {

PulseSchedule scaled(PulseSchedule s, double f) {
  for (auto &row : s.amplitudes)
    for (double &c : row)
      c *= f;
  return s;
}

// Synthetic trace: phi = sin(2 pi t / period), pulse bang-bang along phi.
std::pair<SwitchingTrace, PulseSchedule> synthetic(double period) {
  PulseSchedule s = constant_schedule(0.0, 10.0, 100, {4.8});
  SwitchingTrace tr;
  tr.phi.resize(1);
  tr.pulse.resize(1);
  for (int k = 0; k < 100; ++k) {
    const double mid = (k + 0.5) * 0.1;
    s.amplitudes[0][k] = std::sin(kTwoPi * mid / period) > 0 ? 0.02 : -0.02;
  }
  for (int j = 0; j <= 1000; ++j) {
    const double t = j * 0.01;
    tr.times.push_back(t);
    tr.phi[0].push_back(std::sin(kTwoPi * t / period));
    tr.pulse[0].push_back(sample_at(s, 0, t));
  }
  return {tr, s};
}

} // namespace

TEST_CASE("Dyson: first order 01 -> 10 vanishes and channels sum to A2") {
  for (int levels : {2, 3}) {
    const DeviceSpec d = reference_device(levels);
    const ControlSystem sys(d);
    for (std::uint64_t seed : {1u, 2u}) {
      const PulseSchedule s =
          random_schedule(seed, PulseBounds{}, d.omega, 100, 10.0);
      const DysonReport r = dyson_amplitudes(sys, s, "01", "10", 64);
      CHECK(std::abs(r.first_order) < 1e-14);
      CHECK(r.channels.size() == static_cast<std::size_t>(sys.dim()));
      CHECK(std::abs(r.channel_sum() - r.second_order) < 1e-8);
      CHECK(std::abs(r.second_order) > 1e-3);
      CHECK(r.second_order_probability ==
            doctest::Approx(std::norm(r.second_order)));
      const auto ranked = r.ranked_channels();
      for (std::size_t k = 1; k < ranked.size(); ++k)
        CHECK(std::abs(r.channels.at(ranked[k - 1])) >=
              std::abs(r.channels.at(ranked[k])));
    }
  }
}

TEST_CASE("Dyson quadrature self-convergence under n_quad doubling") {
  const DeviceSpec d = reference_device(3);
  const ControlSystem sys(d);
  const PulseSchedule s = random_schedule(5, PulseBounds{}, d.omega, 100, 9.0);
  const DysonReport a = dyson_amplitudes(sys, s, "01", "10", 256);
  const DysonReport b = dyson_amplitudes(sys, s, "01", "10", 512);
  CHECK(std::abs(a.second_order - b.second_order) <
        1e-6 * std::abs(b.second_order));
  for (const auto &[m, amp] : b.channels)
    CHECK(std::abs(a.channels.at(m) - amp) < 1e-6 * std::abs(b.second_order));
}

TEST_CASE("Dyson operators agree with the channel route and the propagator") {
  const DeviceSpec d = reference_device(3);
  const ControlSystem sys(d);
  const PulseSchedule s = random_schedule(6, PulseBounds{}, d.omega, 50, 6.0);
  const DysonOperators ops = dyson_operators(sys, s, 128);
  const DysonReport r = dyson_amplitudes(sys, s, "01", "12", 128);
  const auto i = index_of_label("01", 2, 3), f = index_of_label("12", 2, 3);
  CHECK(std::abs(ops.second(f, i) - r.second_order) < 1e-12);
  CHECK(std::abs(ops.first(f, i) - r.first_order) < 1e-12);
  // First order is anti-Hermitian: -i times a Hermitian integral.
  CHECK((ops.first + ops.first.adjoint()).norm() < 1e-12);
  // Unitarity at second order: U1 + U1^dag + U1^dag U1 + U2 + U2^dag = 0.
  const CMatrix defect = ops.first.adjoint() * ops.first + ops.second +
                         ops.second.adjoint();
  // Holds to quadrature accuracy.
  CHECK(defect.norm() < 1e-6);
}

TEST_CASE("Dyson: zero drive and weak drive") {
  const DeviceSpec d = reference_device(3);
  const ControlSystem sys(d);
  const CVector psi0 = basis_state(d, Frame::bare, "01");
  const PulseSchedule zero = constant_schedule(0.0, 10.0, 20, d.omega);
  const DysonReport r = dyson_amplitudes(sys, zero, "01", "10", 16);
  CHECK(r.first_order == cplx(0.0));
  CHECK(r.second_order == cplx(0.0));
  const SecondOrderState z = second_order_state(sys, zero, psi0, 100, 16);
  CHECK((z.state - sys.to_dressed(psi0)).norm() == 0.0);
  CHECK(std::abs(z.infidelity) < 1e-14);

  const PulseSchedule base =
      random_schedule(9, PulseBounds{}, d.omega, 100, 10.0);
  const SecondOrderState strong = second_order_state(sys, base, psi0, 1000, 128);
  const SecondOrderState weak =
      second_order_state(sys, scaled(base, 0.01), psi0, 1000, 128);
  CHECK(weak.infidelity <= 1e-6);
  CHECK(strong.infidelity > weak.infidelity);
}

TEST_CASE("interference test") {
  DysonReport r;
  r.channels = {{"00", cplx(0.3, 0.1)}, {"11", cplx(0.2, 0.05)},
                {"02", cplx(-0.3, -0.1)}, {"20", cplx(0.0, 0.0)}};
  CHECK(interference_test(r, "00", "11").constructive);
  CHECK_FALSE(interference_test(r, "00", "02").constructive);
  const Interference neutral = interference_test(r, "00", "20");
  CHECK_FALSE(neutral.constructive);
  CHECK(neutral.margin == doctest::Approx(0.0));
  CHECK_THROWS_AS(interference_test(r, "00", "22"), InputError);
}

TEST_CASE("certificate: aligned bang-bang pulse passes") {
  auto [tr, s] = synthetic(2.5);
  const BangBangCertificate c = certify_trace(tr, s);
  CHECK(c.sign_agreement_total > 0.97);
  CHECK(c.saturation_total == 1.0);
  CHECK(c.pulse_flips == 7);
  CHECK(c.max_flip_offset <= c.segment_width);
}

TEST_CASE("certificate: violating pulse is reported with its interval") {
  auto [tr, s] = synthetic(10.0);
  // phi > 0 on (0, 5): force the pulse negative on [2, 3).
  for (int k = 20; k < 30; ++k)
    s.amplitudes[0][k] = -0.02;
  for (std::size_t j = 0; j < tr.times.size(); ++j)
    tr.pulse[0][j] = sample_at(s, 0, tr.times[j]);
  const BangBangCertificate c = certify_trace(tr, s);
  REQUIRE(c.violations.size() == 1);
  CHECK(c.violations[0].qubit == 0);
  CHECK(c.violations[0].start == doctest::Approx(2.0));
  CHECK(c.violations[0].end == doctest::Approx(2.99));
  CHECK(c.sign_agreement_total < 0.92);
  CHECK(c.max_flip_offset > 1.0);
}

TEST_CASE("certificate on random schedules: sign agreement near one half") {
  const DeviceSpec d = reference_device(2);
  const ControlSystem sys(d);
  const Observable obs = make_observable(h2(), d, Frame::dressed);
  const CVector psi0 = basis_state(d, Frame::dressed, "01");
  double sum = 0.0;
  const int n = 8;
  for (int k = 0; k < n; ++k) {
    const PulseSchedule s =
        random_schedule(100 + k, PulseBounds{}, d.omega, 100, 15.0);
    const BangBangCertificate c =
        bang_bang_certificate(sys, s, obs, {}, 1000, psi0);
    sum += c.sign_agreement_total;
    CHECK(c.saturation_total < 0.05);
  }
  CHECK(std::abs(sum / n - 0.5) < 0.15);
}

TEST_CASE("MET scan rejects unsorted grids") {
  CtrlProblem p;
  p.device = reference_device(2);
  p.hamiltonian = h2();
  MetScanOptions o;
  o.durations = {10.0, 9.0};
  CHECK_THROWS_AS(met_scan(p, {}, o), InputError);
  o.durations = {0.0, 1.0};
  CHECK_THROWS_AS(met_scan(p, {}, o), InputError);
}

TEST_CASE("MET scan reports the shortest duration with a success") {
  CtrlProblem p;
  p.device = reference_device(2);
  p.hamiltonian = h2();
  MetScanOptions o;
  o.durations = {8.0, 22.0};
  o.multistart.n_starts = 1;
  o.multistart.seed0 = 3;
  const MetScanResult r = met_scan(p, {}, o);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].successes == 0);
  CHECK(r.points[1].successes == 1);
  REQUIRE(r.met_estimate.has_value());
  CHECK(*r.met_estimate == 22.0);
  REQUIRE(r.met_point() != nullptr);
  CHECK(r.met_point()->solution->success);
  CHECK(r.success_probabilities() == std::vector<double>{0.0, 1.0});
}

TEST_CASE("target populations: 01 carries 6.92 times the weight of 10") {
  const auto p = target_populations(h2());
  CHECK(p.at("01") / p.at("10") == doctest::Approx(6.92).epsilon(0.05 / 6.92));
  CHECK(p.at("00") < 1e-20);
  CHECK(p.at("11") < 1e-20);
  CHECK(p.at("10") / (p.at("01") + p.at("10")) ==
        doctest::Approx(1.0 / (1.0 + p.at("01") / p.at("10"))));
}

TEST_CASE("population series: qubit raw and normalized coincide") {
  const DeviceSpec d = reference_device(2);
  const ControlSystem sys(d);
  const PulseSchedule s = random_schedule(4, PulseBounds{}, d.omega, 100, 10.0);
  const auto ev = evolve(sys, s, basis_state(d, Frame::bare, "01"), 200,
                         all_labels(d), Frame::dressed);
  const PopulationSeries p = population_series("qubit", ev.trace, "10", 2);
  for (std::size_t j = 0; j < p.times.size(); ++j)
    CHECK(p.raw[j] == doctest::Approx(p.normalized[j]).epsilon(1e-12));
  const auto reach = first_reach_time({0.0, 1.0, 2.0, 3.0}, {0.0, 0.1, 0.2, 0.3},
                                      0.2, 1e-3);
  REQUIRE(reach.has_value());
  CHECK(*reach == 2.0);
  CHECK_FALSE(first_reach_time({0.0, 1.0}, {0.0, 0.1}, 0.5, 1e-3).has_value());
}
