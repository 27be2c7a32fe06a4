#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "obslab/masks.hpp"
#include "obslab/spectral.hpp"

namespace obslab {

// Fourier coefficients (first component, second component) of one mode.
using Pair = std::array<double, 2>;

// Two-component state truncated to the first n modes of a SpectralDomain.
// The L2 norm is the Euclidean norm of the coefficients (Parseval).
class SpectralState {
 public:
  SpectralState() = default;
  explicit SpectralState(int n_modes);
  explicit SpectralState(std::vector<Pair> coefficients);

  static SpectralState single_mode(int n_modes, int mode, double first, double second);
  // Inverse of flatten().
  static SpectralState unflatten(const Eigen::VectorXd& values);

  int size() const { return static_cast<int>(coeffs_.size()); }
  const Pair& operator[](int j) const { return coeffs_[j]; }
  Pair& operator[](int j) { return coeffs_[j]; }
  const std::vector<Pair>& coefficients() const { return coeffs_; }

  double squared_norm() const;
  double norm() const;
  bool is_zero() const;
  SpectralState scaled(double factor) const;
  // (v_{1,0}, v_{2,0}, v_{1,1}, v_{2,1}, ...)
  Eigen::VectorXd flatten() const;

 private:
  std::vector<Pair> coeffs_;
};

enum class SelectorKind { First, Direction, Full };

// Observation operator: B = (1, 0), B-hat = (mu1, mu2) or B-tilde = I.
class ObservationSelector {
 public:
  static ObservationSelector first() { return ObservationSelector(SelectorKind::First, 1.0, 0.0); }
  static ObservationSelector direction(double mu1, double mu2);
  static ObservationSelector full() { return ObservationSelector(SelectorKind::Full, 1.0, 0.0); }

  SelectorKind kind() const { return kind_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }

 private:
  ObservationSelector(SelectorKind kind, double mu1, double mu2)
      : kind_(kind), mu1_(mu1), mu2_(mu2) {}
  SelectorKind kind_;
  double mu1_;
  double mu2_;
};

// Grid values of an observation. `secondary` is filled only for the Full selector.
struct ObservedField {
  std::vector<double> primary;
  std::vector<double> secondary;

  bool two_components() const { return !secondary.empty(); }
};

// t -> e^{-a lambda t} (phi_1 cos(lambda b t) + phi_2 sin(lambda b t)): the first
// component of one evolved mode.
class ModeTrace {
 public:
  ModeTrace(double eigenvalue, Pair initial, const PhysicalParams& params);

  double operator()(double t) const;
  // e^{-a lambda t} |initial|, an upper bound for |trace(t)|.
  double envelope(double t) const;

 private:
  double eigenvalue_;
  Pair initial_;
  double a_;
  double b_;
};

// e^{-a lambda t} R(lambda b t) applied to one pair, R(p) = [[cos p, sin p], [-sin p, cos p]].
Pair evolve_pair(const Pair& pair, double eigenvalue, const PhysicalParams& params, double t);

SpectralState evolve(const SpectralState& state, const SpectralDomain& domain,
                     const PhysicalParams& params, double t);

// Per-mode coefficients of the scalar observation (First or Direction).
Eigen::VectorXd observation_coefficients(const SpectralState& state,
                                         const ObservationSelector& selector);

ObservedField observe(const SpectralState& state, const SpectralDomain& domain,
                      const ObservationSelector& selector);

// Midpoint L1 norm over the mask. Two-component fields use the pointwise
// Euclidean magnitude.
double l1_norm(const ObservedField& field, const SpatialMask& mask);

// L1 norm of the observation of e^{At} z restricted to the mask.
double observed_trace_l1(const SpectralState& state, const SpectralDomain& domain,
                         const PhysicalParams& params, const ObservationSelector& selector,
                         double t, const SpatialMask& mask);

// Midpoint-rule L2 norm of both component fields (compare with norm()).
double grid_l2_norm(const SpectralState& state, const SpectralDomain& domain);

// (phi_1, -phi_2): reduces the case b < 0 to b > 0.
SpectralState conjugate(const SpectralState& state);

}  // namespace obslab
