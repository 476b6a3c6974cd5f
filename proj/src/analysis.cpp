// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpulse/errors.hpp"
#include "step_kernel.hpp"

namespace qpulse {

std::vector<double> MetScanResult::durations() const {
  std::vector<double> out;
  for (const auto &p : points)
    out.push_back(p.duration);
  return out;
}

std::vector<double> MetScanResult::success_probabilities() const {
  std::vector<double> out;
  for (const auto &p : points)
    out.push_back(p.success_probability);
  return out;
}

const MetScanPoint *MetScanResult::met_point() const {
  if (!met_estimate)
    return nullptr;
  for (const auto &p : points)
    if (p.duration == *met_estimate)
      return &p;
  return nullptr;
}

MetScanResult met_scan(const CtrlProblem &problem, const OptimizerConfig &cfg,
                       const MetScanOptions &opts, const MetProgress &progress) {
  const auto &grid = opts.durations;
  if (grid.empty())
    throw InputError("duration grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw InputError("duration grid must be positive and strictly increasing");

  MetScanResult out;
  out.n_starts = opts.multistart.n_starts;
  for (double t : grid) {
    const PreparedProblem prepared(problem.at_duration(t));
    MultistartResult ms = multistart(prepared, cfg, opts.multistart);
    MetScanPoint point;
    point.duration = t;
    point.attempted = ms.attempted;
    point.successes = ms.successes;
    point.success_probability = ms.success_probability;
    point.best_energy_error = std::numeric_limits<double>::infinity();
    for (auto &run : ms.runs) {
      point.best_energy_error =
          std::min(point.best_energy_error,
                   std::abs(run.report.energy - prepared.reference_energy()));
      if (run.success && !point.solution)
        point.solution = std::move(run);
    }
    if (point.successes > 0 && !out.met_estimate)
      out.met_estimate = t;
    if (progress)
      progress(point);
    out.points.push_back(std::move(point));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

BangBangCertificate certify_trace(const SwitchingTrace &trace,
                                  const PulseSchedule &s,
                                  const CertificateOptions &opts) {
  const int nq = s.n_qubits();
  if (static_cast<int>(trace.phi.size()) != nq ||
      static_cast<int>(trace.pulse.size()) != nq)
    throw InputError("switching trace and schedule drive different qubit counts");
  BangBangCertificate c;
  c.trace = trace;
  c.segment_width = s.segment_width();
  const auto &t = trace.times;
  int agree_all = 0;
  int saturated_all = 0;
  for (int q = 0; q < nq; ++q) {
    const auto &phi = trace.phi[q];
    const auto &pulse = trace.pulse[q];
    if (phi.size() != t.size() || pulse.size() != t.size())
      throw InputError("switching trace arrays have inconsistent lengths");
    double peak = 0.0;
    for (double v : phi)
      peak = std::max(peak, std::abs(v));
    const double eps = opts.epsilon * peak;

    int tested = 0, agree = 0;
    int run_start = -1;
    auto close_run = [&](int last) {
      if (run_start >= 0)
        c.violations.push_back({q, t[run_start], t[last]});
      run_start = -1;
    };
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (!(std::abs(phi[j]) > eps)) {
        close_run(static_cast<int>(j) - 1);
        continue;
      }
      ++tested;
      if (sign_of(pulse[j]) == sign_of(phi[j])) {
        ++agree;
        close_run(static_cast<int>(j) - 1);
      } else if (run_start < 0) {
        run_start = static_cast<int>(j);
      }
    }
    close_run(static_cast<int>(t.size()) - 1);
    c.sign_agreement.push_back(tested ? static_cast<double>(agree) / tested : 1.0);
    c.tested_samples += tested;
    agree_all += agree;

    int saturated = 0;
    for (double a : s.amplitudes[q])
      if (std::abs(a) >= (1.0 - opts.saturation_tol) * s.amp_bound &&
          s.amp_bound > 0.0)
        ++saturated;
    c.saturation.push_back(static_cast<double>(saturated) / s.n_segments);
    saturated_all += saturated;

    std::vector<double> crossings;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
      if (phi[j] == 0.0)
        crossings.push_back(t[j]);
      else if (phi[j] * phi[j + 1] < 0.0)
        crossings.push_back(t[j] + (t[j + 1] - t[j]) * phi[j] /
                                       (phi[j] - phi[j + 1]));
    }
    if (!phi.empty() && phi.back() == 0.0)
      crossings.push_back(t.back());

    int previous = 0;
    for (int k = 0; k < s.n_segments; ++k) {
      const int sg = sign_of(s.amplitudes[q][k]);
      if (sg == 0)
        continue;
      if (previous != 0 && sg != previous) {
        ++c.pulse_flips;
        const double flip = k * c.segment_width;
        double best = std::numeric_limits<double>::infinity();
        for (double x : crossings)
          best = std::min(best, std::abs(x - flip));
        c.max_flip_offset = std::max(c.max_flip_offset, best);
      }
      previous = sg;
    }
  }
  c.sign_agreement_total =
      c.tested_samples ? static_cast<double>(agree_all) / c.tested_samples : 1.0;
  c.saturation_total =
      static_cast<double>(saturated_all) / (static_cast<double>(nq) * s.n_segments);
  return c;
}

BangBangCertificate bang_bang_certificate(const ControlSystem &sys,
                                          const PulseSchedule &s,
                                          const Observable &obs,
                                          const ObjectiveConfig &cfg,
                                          int n_trotter, const CVector &psi0,
                                          const CertificateOptions &opts) {
  return certify_trace(switching_trace(sys, s, obs, cfg, n_trotter, psi0), s,
                       opts);
}

// ---------------------------------------------------------------------------

cplx DysonReport::channel_sum() const {
  cplx sum{};
  for (const auto &[label, a] : channels)
    sum += a;
  return sum;
}

std::vector<std::string> DysonReport::ranked_channels() const {
  std::vector<std::string> out;
  for (const auto &[label, a] : channels)
    out.push_back(label);
  std::stable_sort(out.begin(), out.end(), [&](const auto &x, const auto &y) {
    return std::abs(channels.at(x)) > std::abs(channels.at(y));
  });
  return out;
}

namespace {

// Quadrature nodes: each segment split into n_quad equal subintervals.
// Nodes on a segment edge appear twice, once with each neighbouring
// segment's amplitude, so every trapezoid panel lies inside one segment.
struct DysonGrid {
  const ControlSystem &sys;
  const PulseSchedule &s;
  int n_quad;

  double h() const { return s.segment_width() / n_quad; }

  /// (-i) H_{I,C}(t) in labelled dressed coordinates, amplitudes of
  /// segment k.
  CMatrix generator(int k, double t) const {
    const auto d = sys.dim();
    CMatrix kmat = CMatrix::Zero(d, d);
    for (int q = 0; q < s.n_qubits(); ++q) {
      const double omega = s.amplitudes[q][k];
      if (omega == 0.0)
        continue;
      const cplx c = kTwoPi * omega * std::polar(1.0, kTwoPi * s.drive_freq[q] * t);
      kmat += c * sys.lowering(q) + std::conj(c) * sys.raising(q);
    }
    const CVector p = detail::interaction_phase(sys, t);
    return cplx(0.0, -1.0) * (p.asDiagonal() * kmat * p.conjugate().asDiagonal());
  }

  /// Calls f(panel_start_generator, panel_end_generator, h) for every panel
  /// in time order.
  template <typename F> void for_each_panel(F &&f) const {
    const double w = s.segment_width();
    for (int k = 0; k < s.n_segments; ++k) {
      CMatrix left = generator(k, k * w);
      for (int r = 0; r < n_quad; ++r) {
        const double t1 = k * w + (r + 1) * h();
        CMatrix right = generator(k, t1);
        f(left, right);
        left = std::move(right);
      }
    }
  }
};

void check_quadrature(const PulseSchedule &s, int n_quad) {
  if (n_quad < 1)
    throw InputError("n_quad must be at least 1");
  if (s.n_segments < 1 || !(s.duration > 0.0))
    throw InputError("schedule has no segments");
}

} // namespace

DysonReport dyson_amplitudes(const ControlSystem &sys, const PulseSchedule &s,
                             const std::string &initial,
                             const std::string &final, int n_quad) {
  check_quadrature(s, n_quad);
  const auto &spec = sys.spec();
  if (s.n_qubits() != spec.n_transmons)
    throw InputError("schedule and device have different transmon counts");
  const auto i = static_cast<Eigen::Index>(
      index_of_label(initial, spec.n_transmons, spec.levels));
  const auto f = static_cast<Eigen::Index>(
      index_of_label(final, spec.n_transmons, spec.levels));
  const auto d = sys.dim();
  const DysonGrid grid{sys, s, n_quad};
  const double h = grid.h();

  // Channel route: g(t) = int_0^t (-i)H|i>, A_m = int <f|(-i)H|m> g_m.
  CVector g = CVector::Zero(d);
  CVector channel = CVector::Zero(d);
  // Operator route: M(t) = int_0^t (-i)H as a full matrix, and the row
  // <f| U2 = int <f|(-i)H M.
  CMatrix m_acc = CMatrix::Zero(d, d);
  Eigen::RowVectorXcd u2_row = Eigen::RowVectorXcd::Zero(d);
  grid.for_each_panel([&](const CMatrix &left, const CMatrix &right) {
    const CVector g_next = g + 0.5 * h * (left.col(i) + right.col(i));
    channel += 0.5 * h *
               (left.row(f).transpose().cwiseProduct(g) +
                right.row(f).transpose().cwiseProduct(g_next));
    g = g_next;
    const CMatrix m_next = m_acc + 0.5 * h * (left + right);
    u2_row += 0.5 * h * (left.row(f) * m_acc + right.row(f) * m_next);
    m_acc = m_next;
  });

  DysonReport r;
  r.initial = initial;
  r.final = final;
  r.n_quad = n_quad;
  r.first_order = g[f];
  r.second_order = u2_row[i];
  for (Eigen::Index m = 0; m < d; ++m)
    r.channels[label_of(static_cast<std::size_t>(m), spec.n_transmons,
                        spec.levels)] = channel[m];
  r.first_order_probability = std::norm(r.first_order);
  r.second_order_probability = std::norm(r.second_order);
  return r;
}

DysonOperators dyson_operators(const ControlSystem &sys, const PulseSchedule &s,
                               int n_quad) {
  check_quadrature(s, n_quad);
  const auto d = sys.dim();
  const DysonGrid grid{sys, s, n_quad};
  const double h = grid.h();
  CMatrix m_acc = CMatrix::Zero(d, d);
  CMatrix u2 = CMatrix::Zero(d, d);
  grid.for_each_panel([&](const CMatrix &left, const CMatrix &right) {
    const CMatrix m_next = m_acc + 0.5 * h * (left + right);
    u2 += 0.5 * h * (left * m_acc + right * m_next);
    m_acc = m_next;
  });
  return {m_acc, u2};
}

SecondOrderState second_order_state(const ControlSystem &sys,
                                    const PulseSchedule &s, const CVector &psi0,
                                    int n_trotter, int n_quad) {
  const DysonOperators ops = dyson_operators(sys, s, n_quad);
  const CVector x = sys.to_dressed(psi0);
  SecondOrderState out;
  out.state = x + ops.first * x + ops.second * x;
  out.exact = sys.to_dressed(evolve(sys, s, psi0, n_trotter).final_state);
  const double norm2 = out.state.squaredNorm();
  out.fidelity = norm2 > 0.0 ? std::norm(out.exact.dot(out.state)) / norm2 : 0.0;
  out.infidelity = 1.0 - out.fidelity;
  return out;
}

Interference interference_test(const DysonReport &report, const std::string &m1,
                               const std::string &m2) {
  const auto a = report.channels.find(m1);
  const auto b = report.channels.find(m2);
  if (a == report.channels.end() || b == report.channels.end())
    throw InputError("channel " + (a == report.channels.end() ? m1 : m2) +
                     " is not in the report");
  Interference out;
  out.coherent = std::norm(a->second + b->second);
  out.incoherent = std::norm(a->second) + std::norm(b->second);
  out.margin = out.coherent - out.incoherent;
  out.constructive = out.margin > 1e-12 * std::max(out.incoherent, 1e-300);
  return out;
}

// ---------------------------------------------------------------------------

PopulationSeries population_series(const std::string &name,
                                   const EvolutionTrace &trace,
                                   const std::string &label,
                                   int n_transmons) {
  PopulationSeries out;
  out.name = name;
  out.times = trace.times;
  const auto at = [&](const std::string &l) -> const std::vector<double> & {
    const auto it = std::find(trace.labels.begin(), trace.labels.end(), l);
    if (it == trace.labels.end())
      throw InputError("trace does not record label " + l);
    return trace.populations[it - trace.labels.begin()];
  };
  const auto &target = at(label);
  std::vector<double> comp(trace.times.size(), 0.0);
  const std::size_t n_comp = std::size_t{1} << n_transmons;
  for (std::size_t c = 0; c < n_comp; ++c) {
    const std::string l = label_of(c, n_transmons, 2);
    const auto &p = at(l);
    for (std::size_t j = 0; j < comp.size(); ++j)
      comp[j] += p[j];
  }
  for (std::size_t j = 0; j < comp.size(); ++j) {
    out.raw.push_back(target[j]);
    out.normalized.push_back(comp[j] > 0.0 ? target[j] / comp[j] : 0.0);
  }
  return out;
}

std::map<std::string, double> target_populations(const PauliHamiltonian &h) {
  const GroundState g = exact_ground_state(h);
  std::map<std::string, double> out;
  for (Eigen::Index c = 0; c < g.vector.size(); ++c)
    out[label_of(static_cast<std::size_t>(c), h.n_qubits(), 2)] =
        std::norm(g.vector[c]);
  return out;
}

std::optional<double> first_reach_time(const std::vector<double> &times,
                                       const std::vector<double> &values,
                                       double target, double tol) {
  for (std::size_t j = 0; j < times.size() && j < values.size(); ++j)
    if (std::abs(values[j] - target) <= tol)
      return times[j];
  return std::nullopt;
}

} // namespace qpulse
