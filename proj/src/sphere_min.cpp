#include "obslab/sphere_min.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"

namespace obslab {

namespace {

struct Descent {
  Eigen::VectorXd x;
  double value;
};

Descent descend(const SphereObjective& f, Eigen::VectorXd x, const SphereMinOptions& options,
                int& evaluations) {
  Eigen::VectorXd g(x.size());
  double fx = f(x, &g);
  ++evaluations;
  if (!std::isfinite(fx)) return {x, fx};
  double step = 1.0;
  int stalls = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd gt = g - g.dot(x) * x;
    const double gn2 = gt.squaredNorm();
    if (std::sqrt(gn2) <= options.gradient_tolerance * (1.0 + std::abs(fx))) break;
    bool accepted = false;
    Eigen::VectorXd y;
    double fy = 0.0;
    for (double t = step; t > 1e-18; t *= 0.5) {
      y = (x - t * gt).normalized();
      fy = f(y, nullptr);
      ++evaluations;
      if (std::isfinite(fy) && fy <= fx - 1e-4 * t * gn2) {
        accepted = true;
        step = 2.0 * t;
        break;
      }
    }
    if (!accepted) break;
    const double decrease = fx - fy;
    x = y;
    fx = f(x, &g);
    ++evaluations;
    stalls = decrease <= 1e-15 * std::abs(fx) ? stalls + 1 : 0;
    if (stalls >= 3) break;
  }
  return {x, fx};
}

}  // namespace

SphereMinResult minimize_on_sphere(const SphereObjective& f, int dim,
                                   const SphereMinOptions& options,
                                   const std::vector<Eigen::VectorXd>& warm_starts) {
  if (dim < 1) throw InvalidArgument("sphere dimension must be positive");
  if (options.restarts < 0) throw InvalidArgument("restart count must be nonnegative");
  SphereMinResult best;
  best.value = std::numeric_limits<double>::infinity();

  auto consider = [&](const Descent& d) {
    if (std::isfinite(d.value) && d.value < best.value) {
      best.value = d.value;
      best.argmin = d.x;
    }
  };

  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd x = Eigen::VectorXd::Constant(1, s);
      consider({x, f(x, nullptr)});
      ++best.evaluations;
    }
  } else {
    for (const auto& w : warm_starts) {
      if (w.size() != dim || !(w.norm() > 0.0)) continue;
      consider(descend(f, w.normalized(), options, best.evaluations));
    }
    Rng rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int r = 0; r < options.restarts; ++r) {
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x[i] = normal(rng);
      if (!(x.norm() > 0.0)) continue;
      consider(descend(f, x.normalized(), options, best.evaluations));
    }
  }
  if (!std::isfinite(best.value)) {
    throw NumericalError("sphere minimization produced no finite value");
  }
  return best;
}

}  // namespace obslab
