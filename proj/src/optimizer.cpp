// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#include "qpulse/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "qpulse/errors.hpp"
#include "qpulse/pulsegrid.hpp"

namespace qpulse {

void OptimizerConfig::validate() const {
  if (memory_pairs < 1 || max_iters < 0 || stall_iters < 1 || !(grad_tol > 0.0) ||
      !(cost_tol > 0.0) || !(energy_success_threshold > 0.0))
    throw InputError("optimizer tolerances and counts must be positive");
  if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0))
    throw InputError("line-search factors must lie in (0, 1)");
}

std::string to_string(StopReason reason) {
  switch (reason) {
  case StopReason::projected_gradient:
    return "projected_gradient";
  case StopReason::cost_change:
    return "cost_change";
  case StopReason::target_reached:
    return "target_reached";
  case StopReason::line_search:
    return "line_search";
  case StopReason::max_iterations:
    break;
  }
  return "max_iterations";
}

double projected_gradient_norm(const Eigen::VectorXd &x,
                               const Eigen::VectorXd &g,
                               const Eigen::VectorXd &lower,
                               const Eigen::VectorXd &upper) {
  if (x.size() == 0)
    return 0.0;
  return (x - clip(x - g, lower, upper)).lpNorm<Eigen::Infinity>();
}

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
};

std::string describe_point(const Eigen::VectorXd &x) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i)
    os << (i ? ", " : "") << x[i];
  os << "]";
  return os.str();
}

// Two-loop recursion restricted to the free variables (mask = 1).
Eigen::VectorXd quasi_newton_direction(const Eigen::VectorXd &g,
                                       const Eigen::VectorXd &mask,
                                       const std::deque<CurvaturePair> &pairs) {
  Eigen::VectorXd q = -g.cwiseProduct(mask);
  const auto n = pairs.size();
  std::vector<double> alpha(n, 0.0), rho(n, 0.0);
  std::vector<Eigen::VectorXd> s(n), y(n);
  double gamma = 1.0;
  bool have_gamma = false;
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = pairs[k].s.cwiseProduct(mask);
    y[k] = pairs[k].y.cwiseProduct(mask);
    const double sy = s[k].dot(y[k]);
    const double yy = y[k].squaredNorm();
    if (sy > std::numeric_limits<double>::epsilon() * yy && yy > 0.0)
      rho[k] = 1.0 / sy;
  }
  for (std::size_t k = n; k-- > 0;) {
    if (rho[k] == 0.0)
      continue;
    if (!have_gamma) {
      gamma = 1.0 / (rho[k] * y[k].squaredNorm());
      have_gamma = true;
    }
    alpha[k] = rho[k] * s[k].dot(q);
    q -= alpha[k] * y[k];
  }
  q *= gamma;
  for (std::size_t k = 0; k < n; ++k) {
    if (rho[k] == 0.0)
      continue;
    const double beta = rho[k] * y[k].dot(q);
    q += (alpha[k] - beta) * s[k];
  }
  return q;
}

} // namespace

MinimizeResult minimize(const CostFunction &f, const Eigen::VectorXd &x0,
                        const Eigen::VectorXd &lower,
                        const Eigen::VectorXd &upper,
                        const OptimizerConfig &cfg,
                        const IterationCallback &on_iteration) {
  cfg.validate();
  if (x0.size() != lower.size() || x0.size() != upper.size())
    throw InputError("start point and bounds have different lengths");
  if ((lower.array() > upper.array()).any())
    throw InputError("lower bound above upper bound");
  if ((x0.array() < lower.array() - 1e-12).any() ||
      (x0.array() > upper.array() + 1e-12).any())
    throw InputError("start point lies outside the bounds");

  MinimizeResult r;
  r.x = clip(x0, lower, upper);
  Eigen::VectorXd g(x0.size());
  auto evaluate = [&](const Eigen::VectorXd &x, Eigen::VectorXd &grad) {
    const double value = f(x, grad);
    ++r.evaluations;
    if (!std::isfinite(value) || !grad.allFinite())
      throw NumericalError("objective is not finite at x = " +
                           describe_point(x));
    return value;
  };
  r.cost = evaluate(r.x, g);

  std::deque<CurvaturePair> pairs;
  int stalled = 0;
  Eigen::VectorXd mask(x0.size()), x_new(x0.size()), g_new(x0.size());
  for (r.iterations = 0;; ++r.iterations) {
    r.projected_grad_norm = projected_gradient_norm(r.x, g, lower, upper);
    if (on_iteration)
      on_iteration({r.iterations, r.cost, r.projected_grad_norm, &r.x});
    if (cfg.target_cost && r.cost <= *cfg.target_cost) {
      r.reason = StopReason::target_reached;
      break;
    }
    if (r.projected_grad_norm < cfg.grad_tol) {
      r.reason = StopReason::projected_gradient;
      break;
    }
    if (r.iterations >= cfg.max_iters) {
      r.reason = StopReason::max_iterations;
      break;
    }

    // Variables pinned at a bound by the gradient stay fixed this step.
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
      const bool at_lower = r.x[i] <= lower[i] && g[i] > 0.0;
      const bool at_upper = r.x[i] >= upper[i] && g[i] < 0.0;
      mask[i] = (at_lower || at_upper || lower[i] == upper[i]) ? 0.0 : 1.0;
    }

    bool accepted = false;
    double cost_new = r.cost;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d = quasi_newton_direction(g, mask, pairs);
      double slope = g.dot(d);
      if (!(slope < 0.0)) {
        pairs.clear();
        d = -g.cwiseProduct(mask);
        slope = g.dot(d);
        if (!(slope < 0.0))
          break;
      }
      double step = 1.0;
      if (pairs.empty())
        step = std::min(1.0, 1.0 / d.norm());
      for (int k = 0; k < cfg.max_backtracks; ++k) {
        x_new = clip(r.x + step * d, lower, upper);
        const double decrease = g.dot(x_new - r.x);
        if (!(decrease < 0.0)) {
          step *= cfg.backtrack;
          continue;
        }
        cost_new = evaluate(x_new, g_new);
        if (cost_new <= r.cost + cfg.armijo * decrease) {
          accepted = true;
          break;
        }
        // Minimizer of the quadratic through the two costs and the slope,
        // kept within [0.1, backtrack] of the rejected step.
        const double curvature = cost_new - r.cost - decrease;
        double factor = cfg.backtrack;
        if (curvature > 0.0)
          factor = std::clamp(-0.5 * decrease / curvature, 0.1, cfg.backtrack);
        step *= factor;
      }
      if (!accepted)
        pairs.clear();
    }
    if (!accepted) {
      r.reason = StopReason::line_search;
      break;
    }

    CurvaturePair pair{x_new - r.x, g_new - g};
    const double sy = pair.s.dot(pair.y);
    if (sy > std::numeric_limits<double>::epsilon() * pair.y.squaredNorm()) {
      pairs.push_back(std::move(pair));
      if (static_cast<int>(pairs.size()) > cfg.memory_pairs)
        pairs.pop_front();
    }
    const double change = r.cost - cost_new;
    r.x = x_new;
    g = g_new;
    r.cost = cost_new;
    stalled = change < cfg.cost_tol ? stalled + 1 : 0;
    if (stalled >= cfg.stall_iters) {
      ++r.iterations;
      r.projected_grad_norm = projected_gradient_norm(r.x, g, lower, upper);
      r.reason = cfg.target_cost && r.cost <= *cfg.target_cost
                     ? StopReason::target_reached
                     : StopReason::cost_change;
      break;
    }
  }
  return r;
}

} // namespace qpulse
