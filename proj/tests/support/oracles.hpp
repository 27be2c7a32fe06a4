#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "obslab/control.hpp"

namespace oracle {

// Distance from the origin to e^{A*T} v0 + G [nu1, nu2]^N through the support
// function of the reachable set, maximized over `angles` unit directions.
// Only valid for two-dimensional states (one mode).
inline double reachable_distance(const obslab::TimeOptimalProblem& p, double horizon,
                                 int angles = 720) {
  obslab::SpaceTimeSet region =
      obslab::SpaceTimeSet::none(p.domain.grid(), p.time_cells, horizon);
  for (int k = 0; k < p.time_cells; ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (p.omega[c]) region.set(k, c, true);
    }
  }
  const obslab::InputMap map(p.domain, p.params, region);
  const Eigen::VectorXd free = obslab::evolve_adjoint(p.v0, p.domain, p.params, horizon).flatten();
  double best = 0.0;
  for (int i = 0; i < angles; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / angles;
    Eigen::Vector2d w(std::cos(phi), std::sin(phi));
    const Eigen::VectorXd s = map.matrix().transpose() * w;
    double support = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) support += std::max(p.nu1 * s[j], p.nu2 * s[j]);
    best = std::max(best, -w.dot(free) - support);
  }
  return best;
}

// First horizon on a uniform grid of spacing `step` over (0, t_max] where the
// target ball is reachable; scans coarsely, then refines in the bracket.
inline double first_reachable_time(const obslab::TimeOptimalProblem& p, double t_max,
                                   double step) {
  const int coarse = 40;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= coarse; ++i) {
    const double t = t_max * i / coarse;
    if (reachable_distance(p, t) <= p.target_radius) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (!std::isfinite(hi)) return hi;
  for (double t = lo + step; t < hi + 0.5 * step; t += step) {
    if (reachable_distance(p, t) <= p.target_radius) return t;
  }
  return hi;
}

}  // namespace oracle
