#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "obslab/geometry.hpp"
#include "obslab/masks.hpp"
#include "obslab/random.hpp"
#include "obslab/semigroup.hpp"
#include "obslab/spectral.hpp"

namespace obslab {

// ---------------------------------------------------------------------------
// Observation integrals

// o_k = ||chi_{D_k} sel e^{A t_k} z||_{L1} at the midpoint t_k of each listed
// time cell of D.
std::vector<double> observation_profile(const SpectralDomain& domain, const PhysicalParams& params,
                                        const ObservationSelector& selector,
                                        const SpectralState& z, const SpaceTimeSet& set,
                                        const std::vector<int>& time_cells);

// sum_k w_k o_k with w_k = |cell_k cap (lo, hi)| over the cells of `times`.
double integrated_observation(const SpectralDomain& domain, const PhysicalParams& params,
                              const ObservationSelector& selector, const SpectralState& z,
                              const SpaceTimeSet& set, const TimeMask& times, double lo,
                              double hi);

// ---------------------------------------------------------------------------
// Spectral L1 constant

struct SpectralL1Constant {
  double lambda = 0.0;
  int modes = 0;             // k_lambda
  double min_l1 = 0.0;       // min over the unit sphere of ||chi_omega sum a_i e_i||_{L1}
  double constant = 0.0;     // smallest c with c e^{c sqrt(lambda)} = 1 / min_l1^2
  Eigen::VectorXd minimizer;
};

// ||chi_omega sum a_i e_i||_{L1} on the grid for coefficients a of the first a.size() modes.
double masked_l1(const SpectralDomain& domain, const SpatialMask& omega, const Eigen::VectorXd& a);

// Smallest c > 0 with c e^{c s} = rhs (s >= 0, rhs > 0).
double solve_c_exp(double rhs, double s);

SpectralL1Constant estimate_spectral_L1_constant(const SpectralDomain& domain, double lambda,
                                                 const SpatialMask& omega, int restarts = 64,
                                                 std::uint64_t seed = 0,
                                                 const std::vector<Eigen::VectorXd>& warm = {});

// ---------------------------------------------------------------------------
// epsilon form vs product form

// Values of F1, F2, F3 on a finite probe set.
struct FunctionalTriple {
  std::vector<double> f1;
  std::vector<double> f2;
  std::vector<double> f3;
};

struct EquivalenceResult {
  double pi2 = 0.0;
  bool eps_form_holds = false;
  bool product_form_holds = false;
  // The implication: product form holds whenever the epsilon form does.
  bool holds = false;
  double worst_product_ratio = 0.0;  // max F1 / (pi2 F2^{1-theta} F3^theta)
};

// Checks F1 <= pi1 (eps^{-gamma} F2 + eps F3) for every eps in (0, 1) through the
// exact infimum over eps (and on a log-spaced eps grid), then checks
// F1 <= 2 pi1 F2^{1-theta} F3^theta. Requires pi1 >= 1 and F1 <= F3.
EquivalenceResult interp_equivalence(double pi1, double theta, const FunctionalTriple& triple);

// F3 = |h|, F2 = |<w, h>|, F1 = kappa min(F3, F2^{1-theta} F3^theta) on random
// probes h in R^4, so the epsilon form holds with pi1 = 1.
FunctionalTriple random_functional_triple(Rng& rng, int probes, double theta);

// ---------------------------------------------------------------------------
// Integral-type interpolation

struct InterpolationParams {
  double theta = 0.5;
  double s1 = 0.0;
  double s2 = 0.0;

  double gamma() const { return theta / (1.0 - theta); }
  void validate(double horizon) const;
};

struct InterpolationItem {
  double lhs = 0.0;          // ||e^{A S2} z||
  double observation = 0.0;  // int_{S1}^{S2} chi_E ||chi_{D_t} sel e^{At} z||_{L1} dt
  double rhs0 = 0.0;         // (observation / |E cap [S1,S2]|)^{1-theta} ||z||^theta
  double ratio = 0.0;        // lhs / rhs0, 0 for z = 0
};

struct InterpolationReport {
  double e_measure = 0.0;  // |E cap [S1, S2]|
  std::vector<InterpolationItem> items;
  double k_hat = 0.0;
  double m_hat = 0.0;      // solves M e^{M (S2/(1-theta) + 1/(theta S1))} = K |E cap|^3
  // Direction selector only.
  double amplitude_residual = 0.0;
  double field_residual = 0.0;
};

// M with M e^{M q} = target, q > 0, target > 0 (log-space bisection).
double solve_m_exp(double target, double q);

// E is the good-time set of D for the ball enclosing the domain.
InterpolationReport verify_integral_interpolation(const SpectralDomain& domain,
                                                  const PhysicalParams& params,
                                                  const SpaceTimeSet& set,
                                                  const InterpolationParams& ip,
                                                  const std::vector<SpectralState>& batch,
                                                  const ObservationSelector& selector =
                                                      ObservationSelector::first());

// Same with a caller-supplied time set E.
InterpolationReport verify_integral_interpolation(const SpectralDomain& domain,
                                                  const PhysicalParams& params,
                                                  const SpaceTimeSet& set, const TimeMask& times,
                                                  const InterpolationParams& ip,
                                                  const std::vector<SpectralState>& batch,
                                                  const ObservationSelector& selector =
                                                      ObservationSelector::first());

// phi = (mu1 z1 + mu2 z2, mu1 z2 - mu2 z1) per mode.
SpectralState direction_transform(const SpectralState& z, double mu1, double mu2);

// verify_integral_interpolation with the direction selector, plus the checks
// ||phi||^2 = (mu1^2 + mu2^2) ||z||^2 and B e^{At} phi = (mu1, mu2) e^{At} z on the grid.
InterpolationReport verify_direction_observation(const SpectralDomain& domain,
                                                 const PhysicalParams& params,
                                                 const SpaceTimeSet& set,
                                                 const InterpolationParams& ip, double mu1,
                                                 double mu2,
                                                 const std::vector<SpectralState>& batch);

struct PointwiseConstant {
  double time = 0.0;
  double k_hat = 0.0;  // max ||e^{At} z|| / (||chi_{D_t} e^{At} z||_{L1}^{1-theta} ||z||^theta)
  double m_hat = 0.0;  // solves M e^{M (t/(1-theta) + 1/(theta t))} = k_hat
  double min_trace = 0.0;
};

// Full-selector pointwise inequality at each listed time (each must lie in E).
std::vector<PointwiseConstant> verify_full_observation_pointwise(
    const SpectralDomain& domain, const PhysicalParams& params, const SpaceTimeSet& set,
    double theta, const std::vector<double>& times, const std::vector<SpectralState>& batch);

// ---------------------------------------------------------------------------
// Counterexamples

struct CounterexampleState {
  int mode = 0;  // 0-based mode index
  double a = 0.0;
  double b = 0.0;
  std::vector<double> times;
  SpectralState state;
};

struct PointwiseFailure {
  CounterexampleState example;
  std::vector<double> first_traces;  // ||B e^{A S_i} z||_{L1} on Omega
  std::vector<double> full_traces;   // full-selector trace at S_i
  std::vector<double> full_lower;    // e^{-a lambda S_i} ||e_n||_{L1} (grid)
  double terminal_norm = 0.0;        // ||e^{AT} z||
};

// z = (-sin(lambda b S), cos(lambda b S)) e_j, whose first component vanishes at S.
PointwiseFailure pointwise_failure_demo(const SpectralDomain& domain,
                                        const PhysicalParams& params, double s, double horizon,
                                        int mode = 0);

// m observation times at one period spacing of the smallest admissible mode n
// with 2 pi / (|b| lambda_n) <= T / (m + 1).
PointwiseFailure pointwise_failure_demo_multi(const SpectralDomain& domain,
                                              const PhysicalParams& params, int m,
                                              double horizon);

// ---------------------------------------------------------------------------
// Telescoping chain

struct TelescopeOptions {
  double beta = 2.0;
  int depth = 6;
  double radius = 0.0;  // 0: a quarter of the smallest of T and the domain lengths
};

struct TelescopeRing {
  int m = 0;
  double upper = 0.0;       // l_m
  double lower = 0.0;       // l_{m+1}
  double e_measure = 0.0;   // |E^R cap (l_{m+1}, l_m)|
  double k_hat = 0.0;
  double q = 0.0;           // (beta + 1) log K_m - log |E_m|
  double observation = 0.0; // first batch item
  double difference = 0.0;  // first batch item: e^{-C(b+2)mu^m} X_m - e^{-C(b+2)mu^{m+2}} X_{m+2}
  double bound = 0.0;       // first batch item: P obs_m
  double partial_sum = 0.0; // first batch item: sum_{i <= m} obs_i
};

struct TelescopeReport {
  std::array<double, 2> center{0.0, 0.0};
  double center_time = 0.0;
  double radius = 0.0;
  double local_density = 0.0;
  double e_measure = 0.0;
  double density_point = 0.0;
  double density_proxy = 0.0;
  DensitySequence sequence;
  double theta = 0.0;
  double c_hat = 0.0;
  double log_p_hat = 0.0;
  std::vector<TelescopeRing> rings;
  double head_margin = 0.0;  // min over z of (rhs - lhs) / lhs for the summed chain
  bool chain_holds = false;
  double n_hat = 0.0;        // max ||e^{AT} z|| / int int_D |B e^{At} z|
};

TelescopeReport telescope_chain_demo(const SpectralDomain& domain, const PhysicalParams& params,
                                     const SpaceTimeSet& set, const TelescopeOptions& options,
                                     const std::vector<SpectralState>& batch);

}  // namespace obslab
