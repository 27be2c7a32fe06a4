#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace obslab {

// Returns f(x); fills *grad with a (sub)gradient when grad is non-null.
using SphereObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct SphereMinOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  int max_iterations = 300;
  double gradient_tolerance = 1e-12;
};

struct SphereMinResult {
  Eigen::VectorXd argmin;
  double value = 0.0;
  int evaluations = 0;
};

// Minimizes f over the unit sphere of R^dim by Riemannian projected gradient
// with Armijo backtracking. Starts are the warm starts followed by `restarts`
// Gaussian draws. Throws NumericalError when no start yields a finite value.
SphereMinResult minimize_on_sphere(const SphereObjective& f, int dim,
                                   const SphereMinOptions& options = {},
                                   const std::vector<Eigen::VectorXd>& warm_starts = {});

}  // namespace obslab
