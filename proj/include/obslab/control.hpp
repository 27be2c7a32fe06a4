#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "obslab/geometry.hpp"
#include "obslab/masks.hpp"
#include "obslab/semigroup.hpp"
#include "obslab/spectral.hpp"

namespace obslab {

// Piecewise-constant control on the cells of a space-time region; zero outside.
struct ControlField {
  SpaceTimeSet region;
  std::vector<double> values;  // row-major [time cell][space cell]

  static ControlField zero(const SpaceTimeSet& region);
  double at(int time_cell, int space_cell) const {
    return values[static_cast<std::size_t>(time_cell) * region.space_cells() + space_cell];
  }
  double sup_norm() const;
  // Every nonzero value lies inside the region.
  bool supported_in_region() const;
  // x, y, t, value for each region cell.
  void write_csv(std::ostream& out) const;
};

// Discretized input map u -> int_0^T e^{A*(T-s)} (chi_D u(s), 0) ds on the
// truncation, with u constant on each region cell. Time integrals are exact;
// the spatial projection uses the midpoint rule.
class InputMap {
 public:
  InputMap(const SpectralDomain& domain, const PhysicalParams& params, const SpaceTimeSet& region);

  int state_size() const { return static_cast<int>(matrix_.rows()); }
  int control_size() const { return static_cast<int>(matrix_.cols()); }
  // Weight vol * dt of the control inner product.
  double weight() const { return weight_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  // (time cell, space cell) of each control coordinate.
  const std::vector<std::pair<int, int>>& cells() const { return cells_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix_ * u; }
  // Adjoint for the weighted inner product: the time average over each cell of
  // B e^{A(T-s)} z at the cell's spatial midpoint.
  Eigen::VectorXd adjoint(const Eigen::VectorXd& z) const {
    return matrix_.transpose() * z / weight_;
  }
  // sum over region cells of |adjoint(z)| * vol * dt.
  double dual_norm(const Eigen::VectorXd& z) const;

  ControlField to_field(const Eigen::VectorXd& u) const;
  Eigen::VectorXd from_field(const ControlField& field) const;

 private:
  SpaceTimeSet region_;
  Eigen::MatrixXd matrix_;
  std::vector<std::pair<int, int>> cells_;
  double weight_ = 0.0;
};

// e^{A* t} v, A* the per-mode transpose of the generator.
SpectralState evolve_adjoint(const SpectralState& v, const SpectralDomain& domain,
                             const PhysicalParams& params, double t);

// Steps the controlled system cell by cell and returns v(T).
SpectralState simulate_controlled(const SpectralDomain& domain, const PhysicalParams& params,
                                  const SpectralState& v0, const ControlField& control);

struct DualityCheck {
  int probes = 0;
  double max_relative_error = 0.0;
  bool holds = false;
};

// <v(T), z> = <v0, e^{AT} z> + int <u, chi_D B e^{A(T-s)} z> ds for random unit
// z, with v(T) from simulate_controlled and the integral from the input map.
// The error is relative to the largest of the three terms.
DualityCheck duality_identity_check(const SpectralDomain& domain, const PhysicalParams& params,
                                    const SpectralState& v0, const ControlField& control,
                                    int probes, std::uint64_t seed, double tolerance = 1e-8);

// Cells (k, c) -> (n_t - 1 - k, c).
SpaceTimeSet time_reflect(const SpaceTimeSet& set);

struct LEstimate {
  double value = 0.0;
  SpectralState argmin;
};

// min over unit z of (int int_D |B e^{At} z|) / ||e^{AT} z||, with the time
// integral taken cell by cell. Extra candidates are evaluated and used as warm
// starts.
LEstimate estimate_L(const SpectralDomain& domain, const PhysicalParams& params,
                     const SpaceTimeSet& set, int restarts = 64, std::uint64_t seed = 0,
                     const std::vector<SpectralState>& candidates = {});

struct NullControlProblem {
  SpectralDomain domain;
  PhysicalParams params{1.0, 1.0};
  SpectralState v0;
  SpaceTimeSet region;  // D over (0, T)
};

struct NullControlOptions {
  int iterations = 10000;
  int restarts = 64;
  std::uint64_t seed = 0;
};

struct DualityCertificate {
  SpectralState dual_state;     // z-bar, scaled along its ray
  double dual_value = 0.0;      // J(z-bar)
  double magnitude = 0.0;       // M = -<e^{A*T} v0, z> / N(z)
  double terminal_norm = 0.0;   // ||v(T)|| from forward simulation
  double initial_norm = 0.0;
  double l_hat = 0.0;           // on the time-reflected region
  double control_bound = 0.0;   // ||v0|| / l_hat
  double control_sup = 0.0;
  int iterations = 0;
};

struct NullControlResult {
  ControlField control;
  DualityCertificate certificate;
};

// Minimizes J(z) = N(z)^2 / 2 + <v0, e^{AT} z> by averaged subgradient descent,
// recovers u = M sign(adjoint(z)), corrects the residual on the cells where the
// dual trace is smallest (then by projected gradient inside the ||v0|| / L box
// if needed), and certifies the result by forward simulation.
// Throws ConvergenceError when the terminal tolerance is missed.
NullControlResult synthesize_null_control(const NullControlProblem& problem, double tol,
                                          const NullControlOptions& options = {});

struct TimeOptimalProblem {
  SpectralDomain domain;
  PhysicalParams params{1.0, 1.0};
  SpectralState v0;
  SpatialMask omega;
  double nu1 = -1.0;
  double nu2 = 1.0;
  double target_radius = 0.0;  // r
  int time_cells = 128;

  void validate() const;
};

struct FeasibilityProbe {
  double horizon = 0.0;
  double distance = 0.0;  // min ||v(T)|| over admissible controls
  bool feasible = false;
};

struct FeasibilityResult {
  FeasibilityProbe probe;
  ControlField control;
};

// min over nu1 <= u <= nu2 on omega x (0, T) of ||v(T)|| by accelerated
// projected gradient with step 1 / ||G||^2.
FeasibilityResult time_optimal_feasibility(const TimeOptimalProblem& problem, double horizon,
                                           int iterations = 5000,
                                           const Eigen::VectorXd* warm = nullptr);

struct TimeOptimalResult {
  double t_star = 0.0;
  ControlField control;
  double distance = 0.0;
  std::vector<FeasibilityProbe> trace;
};

// Bisection on (0, T_max] for the first time v(T) reaches the target ball.
// tol_T <= 0 selects 1e-3 * T_max. Throws InfeasibleError if T_max is infeasible.
TimeOptimalResult solve_time_optimal(const TimeOptimalProblem& problem, double t_max,
                                     double tol_t = 0.0, int iterations = 5000);

struct BangBangCheck {
  double violation_fraction = 0.0;
  bool holds = false;
};

// Fraction of region cells with nu1 + eps < u < nu2 - eps. eps <= 0 selects
// 0.05 (nu2 - nu1).
BangBangCheck verify_bang_bang(const ControlField& control, double nu1, double nu2,
                               double eps = 0.0);

}  // namespace obslab
