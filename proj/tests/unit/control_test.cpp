#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "obslab/control.hpp"
#include "obslab/errors.hpp"
#include "obslab/random.hpp"
#include "oracles.hpp"

using namespace obslab;

namespace {

constexpr double kPi = std::numbers::pi;

double grid_l1(const SpectralDomain& d, int mode) {
  double s = 0.0;
  for (int c = 0; c < d.n_cells(); ++c) s += std::abs(d.basis()(mode, c)) * d.cell_volume();
  return s;
}

ControlField random_field(const SpaceTimeSet& region, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ControlField f = ControlField::zero(region);
  for (int k = 0; k < region.time_cells(); ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (region.at(k, c)) f.values[static_cast<std::size_t>(k) * region.space_cells() + c] = n(rng);
    }
  }
  return f;
}

TimeOptimalProblem benchmark(double radius, int time_cells = 32) {
  const auto d = SpectralDomain::interval(kPi, 1, 32);
  return {d,    PhysicalParams(1.0, 1.0), SpectralState::single_mode(1, 0, 1.0, 0.0),
          SpatialMask::full(d.grid()), -0.5, 0.5, radius, time_cells};
}

}  // namespace

TEST(InputMap, MatchesForwardSimulation) {
  const auto d = SpectralDomain::interval(kPi, 6, 48);
  const PhysicalParams params(0.8, 1.3);
  Rng rng(1);
  const auto region = random_space_time_set(rng, d.grid(), 20, 1.5, 0.3);
  const ControlField u = random_field(region, 2);
  const SpectralState v0 = random_state(rng, 6);
  const InputMap map(d, params, region);
  const Eigen::VectorXd predicted =
      evolve_adjoint(v0, d, params, 1.5).flatten() + map.apply(map.from_field(u));
  const Eigen::VectorXd simulated = simulate_controlled(d, params, v0, u).flatten();
  EXPECT_LE((predicted - simulated).norm(), 1e-13 * simulated.norm());
  EXPECT_EQ(map.control_size(), region.count());
}

TEST(InputMap, FieldRoundTripAndSupport) {
  const auto d = SpectralDomain::interval(kPi, 2, 16);
  Rng rng(3);
  const auto region = random_space_time_set(rng, d.grid(), 8, 1.0, 0.4);
  const InputMap map(d, PhysicalParams(1.0, 1.0), region);
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(map.control_size(), -1.0, 1.0);
  const ControlField f = map.to_field(u);
  EXPECT_TRUE(f.supported_in_region());
  EXPECT_EQ((map.from_field(f) - u).norm(), 0.0);
  EXPECT_DOUBLE_EQ(f.sup_norm(), 1.0);
  std::ostringstream csv;
  f.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, 10), "x,t,value\n");
}

TEST(Control, ContractionWithoutControl) {
  const auto d = SpectralDomain::interval(kPi, 8, 32);
  const PhysicalParams params(1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(case_seed(4, trial));
    const SpectralState v0 = random_state(rng, 8);
    const auto region = SpaceTimeSet::full(d.grid(), 16, 1.0);
    const SpectralState v = simulate_controlled(d, params, v0, ControlField::zero(region));
    EXPECT_NEAR(v.norm(), evolve_adjoint(v0, d, params, 1.0).norm(), 1e-12);
    EXPECT_LE(v.norm(), std::exp(-1.0) * v0.norm() + 1e-12);
  }
}

TEST(Control, TimeReflection) {
  const auto d = SpectralDomain::interval(kPi, 1, 16);
  Rng rng(5);
  const auto set = random_space_time_set(rng, d.grid(), 10, 1.0, 0.3);
  const auto r = time_reflect(set);
  for (int k = 0; k < 10; ++k) {
    for (int c = 0; c < 16; ++c) EXPECT_EQ(r.at(9 - k, c), set.at(k, c));
  }
  EXPECT_EQ(time_reflect(r).mask(), set.mask());
}

TEST(EstimateL, SingleModePhaseScan) {
  const auto d = SpectralDomain::interval(kPi, 1, 128);
  const PhysicalParams params(1.0, 1.0);
  const double horizon = 1.0;
  const int nt = 256;
  const auto set = SpaceTimeSet::full(d.grid(), nt, horizon);
  const LEstimate l = estimate_L(d, params, set, 16, 0);
  // For z = (cos p, sin p) e_1 the observed first component is e^{-t} cos(t - p).
  double oracle = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3600; ++i) {
    const double p = kPi * i / 3600.0;
    double integral = 0.0;
    const int n = 4000;
    for (int j = 0; j < n; ++j) {
      const double t = horizon * (j + 0.5) / n;
      integral += std::exp(-t) * std::abs(std::cos(t - p)) * horizon / n;
    }
    oracle = std::min(oracle, integral * grid_l1(d, 0) / std::exp(-horizon));
  }
  EXPECT_NEAR(l.value, oracle, 1e-3 * oracle);
  EXPECT_GT(l.value, 0.0);
}

TEST(EstimateL, ShrinkingTheSet) {
  const auto d = SpectralDomain::interval(kPi, 4, 32);
  const PhysicalParams params(1.0, 1.0);
  const auto full = SpaceTimeSet::full(d.grid(), 32, 1.0);
  const auto half =
      SpaceTimeSet::where(d.grid(), 32, 1.0, [](double x, double, double) { return x < kPi / 2; });
  const LEstimate lf = estimate_L(d, params, full, 16, 1);
  const LEstimate lh = estimate_L(d, params, half, 16, 1, {lf.argmin});
  EXPECT_GT(lh.value, 0.0);
  EXPECT_LE(lh.value, lf.value * (1.0 + 1e-12));
}

TEST(NullControl, ZeroInitialState) {
  const auto d = SpectralDomain::interval(kPi, 4, 32);
  const NullControlProblem p{d, PhysicalParams(1.0, 1.0), SpectralState(4),
                             SpaceTimeSet::full(d.grid(), 16, 1.0)};
  const auto r = synthesize_null_control(p, 1e-2);
  EXPECT_EQ(r.control.sup_norm(), 0.0);
  EXPECT_EQ(r.certificate.terminal_norm, 0.0);
}

TEST(NullControl, FirstModeOnFullCylinder) {
  const auto d = SpectralDomain::interval(kPi, 8, 128);
  const PhysicalParams params(1.0, 1.0);
  const NullControlProblem p{d, params, SpectralState::single_mode(8, 0, 1.0, 0.0),
                             SpaceTimeSet::full(d.grid(), 64, 1.0)};
  const auto r = synthesize_null_control(p, 1e-2);
  const auto& c = r.certificate;
  EXPECT_LE(c.terminal_norm, 1e-2 * c.initial_norm);
  EXPECT_NEAR(c.control_bound, c.initial_norm / c.l_hat, 1e-15);
  EXPECT_LE(c.control_sup, c.control_bound * (1.0 + 1e-6));
  EXPECT_NEAR(c.terminal_norm, simulate_controlled(d, params, p.v0, r.control).norm(), 1e-15);
  EXPECT_TRUE(r.control.supported_in_region());

  // Minimal-norm least-squares control on the same input map also reaches the target.
  const InputMap map(d, params, p.region);
  const Eigen::VectorXd free = evolve_adjoint(p.v0, d, params, 1.0).flatten();
  const Eigen::VectorXd u = map.matrix().completeOrthogonalDecomposition().solve(-free);
  const ControlField ls = map.to_field(u);
  EXPECT_LE(simulate_controlled(d, params, p.v0, ls).norm(), 1e-2);

  const DualityCheck dual = duality_identity_check(d, params, p.v0, r.control, 100, 9);
  EXPECT_TRUE(dual.holds);
  EXPECT_LE(dual.max_relative_error, 1e-8);
}

TEST(NullControl, QuarterCylinder) {
  const auto d = SpectralDomain::interval(kPi, 8, 128);
  const PhysicalParams params(1.0, 1.0);
  Rng rng(14);
  const auto region = random_space_time_set(rng, d.grid(), 64, 1.0, 0.25);
  const NullControlProblem p{d, params, SpectralState::single_mode(8, 0, 1.0, 0.0), region};
  const auto r = synthesize_null_control(p, 1e-2);
  EXPECT_LE(r.certificate.terminal_norm, 1e-2);
  EXPECT_LE(r.certificate.control_sup, r.certificate.control_bound * (1.0 + 1e-6));
  EXPECT_TRUE(r.control.supported_in_region());
  EXPECT_TRUE(duality_identity_check(d, params, p.v0, r.control, 20, 1).holds);
}

TEST(NullControl, Errors) {
  const auto d = SpectralDomain::interval(kPi, 4, 32);
  const NullControlProblem p{d, PhysicalParams(1.0, 1.0), SpectralState::single_mode(4, 0, 1, 0),
                             SpaceTimeSet::full(d.grid(), 16, 1.0)};
  EXPECT_THROW(synthesize_null_control(p, 0.5), InvalidArgument);
  const NullControlProblem empty{d, PhysicalParams(1.0, 1.0),
                                 SpectralState::single_mode(4, 0, 1, 0),
                                 SpaceTimeSet::none(d.grid(), 16, 1.0)};
  EXPECT_THROW(synthesize_null_control(empty, 1e-2), InvalidArgument);
  NullControlOptions starved;
  starved.iterations = 2;
  EXPECT_THROW(synthesize_null_control(p, 1e-5 * 2, starved), ConvergenceError);
}

TEST(TimeOptimal, FreeDecayReachesTheBall) {
  TimeOptimalProblem p = benchmark(0.9);
  const double t0 = 0.05;
  p.target_radius = evolve_adjoint(p.v0, p.domain, p.params, t0).norm();
  const auto r = solve_time_optimal(p, 1.0);
  EXPECT_LE(r.t_star, t0 + 1e-3);
}

TEST(TimeOptimal, MatchesGridScan) {
  const TimeOptimalProblem p = benchmark(0.2);
  const double t_max = 2.0;
  const auto r = solve_time_optimal(p, t_max);
  const double scan = oracle::first_reachable_time(p, t_max, 1e-3 * t_max);
  EXPECT_NEAR(r.t_star, scan, 1e-3 * t_max + 1e-12);
  for (const auto& probe : r.trace) {
    if (probe.horizon >= r.t_star) {
      EXPECT_TRUE(probe.feasible);
    }
  }
  const auto bb = verify_bang_bang(r.control, p.nu1, p.nu2);
  EXPECT_TRUE(bb.holds);
}

TEST(TimeOptimal, SmallerBallTakesLonger) {
  const auto wide = solve_time_optimal(benchmark(0.3), 2.0);
  const auto narrow = solve_time_optimal(benchmark(0.15), 2.0);
  EXPECT_GT(narrow.t_star, wide.t_star);
}

TEST(TimeOptimal, Infeasible) {
  TimeOptimalProblem p = benchmark(0.2);
  p.nu1 = -1e-3;
  p.nu2 = 1e-3;
  EXPECT_THROW(solve_time_optimal(p, 0.1), InfeasibleError);
  p.nu1 = 1.0;
  p.nu2 = 0.5;
  EXPECT_THROW(solve_time_optimal(p, 1.0), InvalidArgument);
}

TEST(BangBang, ExtremeValuesHold) {
  const auto d = SpectralDomain::interval(kPi, 1, 10);
  const auto region = SpaceTimeSet::full(d.grid(), 10, 1.0);
  ControlField f = ControlField::zero(region);
  std::fill(f.values.begin(), f.values.end(), 0.5);
  auto r = verify_bang_bang(f, -0.5, 0.5);
  EXPECT_EQ(r.violation_fraction, 0.0);
  EXPECT_TRUE(r.holds);
  // 20 of 100 cells strictly inside the band.
  for (int i = 0; i < 20; ++i) f.values[i * 5] = 0.1;
  r = verify_bang_bang(f, -0.5, 0.5);
  EXPECT_NEAR(r.violation_fraction, 0.2, 1e-15);
  EXPECT_FALSE(r.holds);
}
