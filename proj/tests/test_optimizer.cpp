// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "qpulse/errors.hpp"
#include "qpulse/multistart.hpp"
#include "support.hpp"

using namespace qpulse;
using namespace qpulse::test;

namespace {

CostFunction quadratic(const Eigen::VectorXd &center,
                       const Eigen::VectorXd &weights) {
  return [=](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
    const Eigen::VectorXd r = x - center;
    g = weights.cwiseProduct(r);
    return 0.5 * r.dot(g);
  };
}

CtrlProblem qubit_problem(double T) {
  CtrlProblem p;
  p.device = reference_device(2);
  p.hamiltonian = h2();
  p.duration = T;
  return p;
}

} // namespace

TEST_CASE("interior quadratic minimum in at most 50 iterations") {
  const int m = 40;
  const Eigen::VectorXd center = Eigen::VectorXd::LinSpaced(m, -0.6, 0.7);
  OptimizerConfig plain;
  const MinimizeResult q =
      minimize(quadratic(center, Eigen::VectorXd::Ones(m)),
               Eigen::VectorXd::Zero(m), Eigen::VectorXd::Constant(m, -1.0),
               Eigen::VectorXd::Constant(m, 1.0), plain);
  CHECK(q.converged());
  CHECK(q.iterations <= 50);
  CHECK((q.x - center).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ill-conditioned interior quadratic") {
  const int n = 30;
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -1.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5), w(1.0, 100.0);
  Eigen::VectorXd c(n), d(n);
  for (int i = 0; i < n; ++i) {
    c[i] = u(rng);
    d[i] = w(rng);
  }
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-12;
  cfg.cost_tol = 1e-300;
  const MinimizeResult r = minimize(quadratic(c, d), Eigen::VectorXd::Zero(n),
                                    lo, hi, cfg);
  CHECK(r.converged());
  CHECK(r.iterations <= 200);
  CHECK((r.x - c).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quadratic minimum outside the box converges to its projection") {
  const int n = 12;
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -1.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i)
    c[i] = (i % 3 == 0 ? 3.0 : i % 3 == 1 ? -2.0 : 0.3) * (1.0 + 0.1 * i);
  OptimizerConfig cfg;
  cfg.grad_tol = 1e-12;
  cfg.cost_tol = 1e-300;
  const MinimizeResult r = minimize(
      quadratic(c, Eigen::VectorXd::Ones(n)), Eigen::VectorXd::Zero(n), lo, hi, cfg);
  CHECK(r.converged());
  CHECK((r.x - c.cwiseMax(lo).cwiseMin(hi)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(projected_gradient_norm(r.x, r.x - c, lo, hi) < 1e-10);
}

TEST_CASE("iterates stay feasible and accepted costs never increase") {
  // Rosenbrock chain on a box that cuts off the minimum.
  const int n = 10;
  const CostFunction rosen = [](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
    double f = 0.0;
    g = Eigen::VectorXd::Zero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double a = x[i + 1] - x[i] * x[i], b = 1.0 - x[i];
      f += 100.0 * a * a + b * b;
      g[i] += -400.0 * a * x[i] - 2.0 * b;
      g[i + 1] += 200.0 * a;
    }
    return f;
  };
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -2.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, 0.8);
  double last = std::numeric_limits<double>::infinity();
  bool monotone = true, feasible = true;
  const MinimizeResult r = minimize(
      rosen, Eigen::VectorXd::Constant(n, -1.5), lo, hi, OptimizerConfig{},
      [&](const IterationInfo &info) {
        monotone = monotone && info.cost <= last;
        last = info.cost;
        feasible = feasible && (info.x->array() >= lo.array()).all() &&
                   (info.x->array() <= hi.array()).all();
      });
  CHECK(monotone);
  CHECK(feasible);
  CHECK(r.converged());
}

TEST_CASE("NaN cost aborts with the parameter point; infeasible start rejected") {
  const CostFunction bad = [](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
    g = Eigen::VectorXd::Ones(x.size());
    return x[0] < 0.4 ? std::nan("") : x[0];
  };
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(2);
  try {
    minimize(bad, Eigen::VectorXd::Constant(2, 0.5), lo, hi, {});
    FAIL("expected NumericalError");
  } catch (const NumericalError &e) {
    CHECK(std::string(e.what()).find("[") != std::string::npos);
  }
  CHECK_THROWS_AS(minimize(bad, Eigen::VectorXd::Constant(2, 2.0), lo, hi, {}),
                  InputError);
  OptimizerConfig cfg;
  cfg.memory_pairs = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("ctrl-VQE qubit run at 20 ns: success, determinism, warm start") {
  const PreparedProblem prepared(qubit_problem(20.0));
  const OptimizerConfig cfg;
  const RunResult a = optimize_seed(prepared, 3, cfg);
  const RunResult b = optimize_seed(prepared, 3, cfg);
  CHECK(a.success);
  CHECK(a.converged);
  CHECK(std::abs(a.report.energy - prepared.reference_energy()) < 1e-8);
  CHECK(a.report.energy >= prepared.reference_energy() - 1e-12);
  // Bitwise determinism.
  CHECK(a.report.energy == b.report.energy);
  CHECK(a.iterations == b.iterations);
  CHECK(a.schedule.amplitudes == b.schedule.amplitudes);
  CHECK(a.schedule.drive_freq == b.schedule.drive_freq);
  CHECK_NOTHROW(a.schedule.validate(prepared.problem().device.omega));

  const RunResult warm = optimize_schedule(prepared, a.schedule, cfg);
  CHECK(warm.success);
  CHECK(warm.iterations <= 2);
}

TEST_CASE("multistart is independent of the thread count") {
  const PreparedProblem prepared(qubit_problem(20.0));
  MultistartOptions o;
  o.n_starts = 4;
  o.seed0 = 10;
  const MultistartResult one = multistart(prepared, {}, o);
  o.threads = 3;
  const MultistartResult three = multistart(prepared, {}, o);
  REQUIRE(one.runs.size() == 4);
  REQUIRE(three.runs.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(one.runs[i].seed == 10u + i);
    CHECK(one.runs[i].report.energy == three.runs[i].report.energy);
  }
  CHECK(one.successes == three.successes);
  CHECK(one.success_probability ==
        doctest::Approx(double(one.successes) / one.attempted));
  for (const auto &r : one.runs)
    CHECK((!r.success || r.converged));
}
