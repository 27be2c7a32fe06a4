#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"
#include "obslab/semigroup.hpp"

using namespace obslab;

namespace {

constexpr double kPi = std::numbers::pi;

double pair_norm(const Pair& p) { return std::hypot(p[0], p[1]); }

}  // namespace

TEST(Semigroup, ZeroTimeIsIdentity) {
  const auto d = SpectralDomain::interval(kPi, 8, 32);
  Rng rng(3);
  const SpectralState z = random_state(rng, 8);
  const SpectralState w = evolve(z, d, PhysicalParams(1.3, -0.7), 0.0);
  for (int j = 0; j < 8; ++j) {
    EXPECT_EQ(w[j][0], z[j][0]);
    EXPECT_EQ(w[j][1], z[j][1]);
  }
}

TEST(Semigroup, FirstModeAtPi) {
  const auto d = SpectralDomain::interval(kPi, 4, 32);
  const SpectralState z = SpectralState::single_mode(4, 0, 1.0, 0.0);
  const SpectralState w = evolve(z, d, PhysicalParams(1.0, 1.0), kPi);
  // e^{-t} (cos t, -sin t) at t = pi.
  EXPECT_NEAR(w[0][0], -std::exp(-kPi), 1e-15);
  EXPECT_NEAR(w[0][1], 0.0, 1e-15);
  EXPECT_NEAR(w[0][0], -0.043214, 1e-6);
}

TEST(Semigroup, HalvingTime) {
  const auto d = SpectralDomain::interval(kPi, 2, 32);
  const SpectralState z = SpectralState::single_mode(2, 0, 0.6, 0.8);
  EXPECT_NEAR(evolve(z, d, PhysicalParams(1.0, 2.5), std::log(2.0)).norm(), 0.5, 1e-15);
}

TEST(Semigroup, NegativeTimeRejected) {
  const auto d = SpectralDomain::interval(kPi, 2, 32);
  EXPECT_THROW(evolve(SpectralState(2), d, PhysicalParams(1.0, 1.0), -1e-9), InvalidArgument);
}

TEST(Semigroup, SemigroupLaw) {
  const auto d = SpectralDomain::interval(kPi, 16, 32);
  const PhysicalParams params(0.1, 1.7);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> time(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(case_seed(11, trial));
    const SpectralState z = random_state(rng, 16);
    const double s = time(gen);
    const double t = time(gen);
    const SpectralState a = evolve(evolve(z, d, params, s), d, params, t);
    const SpectralState b = evolve(z, d, params, s + t);
    const double scale = b.norm();
    for (int j = 0; j < 16; ++j) {
      EXPECT_LE(std::abs(a[j][0] - b[j][0]), 1e-12 * scale + 1e-300);
      EXPECT_LE(std::abs(a[j][1] - b[j][1]), 1e-12 * scale + 1e-300);
    }
  }
}

TEST(Semigroup, RotationIsometryPerMode) {
  const auto d = SpectralDomain::rectangle(kPi, 2.0, 12, 8, 8);
  const PhysicalParams params(0.4, -3.0);
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(case_seed(5, trial));
    const SpectralState z = random_state(rng, 12);
    const double t = 0.013 * trial;
    const SpectralState w = evolve(z, d, params, t);
    for (int j = 0; j < 12; ++j) {
      const double expected = std::exp(-params.a * d.eigenvalue(j) * t) * pair_norm(z[j]);
      EXPECT_NEAR(pair_norm(w[j]), expected, 1e-14);
    }
  }
}

TEST(Semigroup, ConjugationSymmetry) {
  const auto d = SpectralDomain::interval(kPi, 10, 32);
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(case_seed(9, trial));
    const SpectralState z = random_state(rng, 10);
    const double t = 0.05 * trial;
    const double lhs = evolve(z, d, PhysicalParams(0.7, 2.0), t).norm();
    const double rhs = evolve(conjugate(z), d, PhysicalParams(0.7, -2.0), t).norm();
    EXPECT_EQ(lhs, rhs);
    // The conjugated trajectory is the conjugate of the original one.
    const SpectralState w = evolve(conjugate(z), d, PhysicalParams(0.7, -2.0), t);
    const SpectralState v = conjugate(evolve(z, d, PhysicalParams(0.7, 2.0), t));
    for (int j = 0; j < 10; ++j) {
      EXPECT_NEAR(w[j][0], v[j][0], 1e-15);
      EXPECT_NEAR(w[j][1], v[j][1], 1e-15);
    }
  }
}

TEST(Semigroup, ModeTraceMatchesEvolve) {
  const auto d = SpectralDomain::interval(kPi, 4, 32);
  const PhysicalParams params(1.0, 1.0);
  const Pair phi{0.3, -1.1};
  const ModeTrace trace(d.eigenvalue(2), phi, params);
  EXPECT_DOUBLE_EQ(trace(0.0), phi[0]);
  SpectralState z(4);
  z[2] = phi;
  for (double t = 0.0; t < 2.0; t += 0.01) {
    EXPECT_NEAR(trace(t), evolve(z, d, params, t)[2][0], 1e-15);
    EXPECT_LE(std::abs(trace(t)), trace.envelope(t) + 1e-15);
  }
}

TEST(Semigroup, ObserveFirstSelector) {
  const auto d = SpectralDomain::interval(kPi, 4, 512);
  const auto zero = observe(SpectralState::single_mode(4, 0, 0.0, 1.0), d,
                            ObservationSelector::first());
  for (double v : zero.primary) EXPECT_EQ(v, 0.0);
  const auto field = observe(SpectralState::single_mode(4, 0, 1.0, 0.0), d,
                             ObservationSelector::first());
  // Cell 255 has its right edge at pi/2; the midpoint value is within h^2 of sqrt(2/pi).
  const double h = kPi / 512;
  EXPECT_NEAR(field.primary[256], std::sqrt(2.0 / kPi), h * h);
  EXPECT_NEAR(field.primary[256], d.eigenfunction(0, (256 + 0.5) * h), 1e-15);
}

TEST(Semigroup, ObserveDirection) {
  const auto d = SpectralDomain::interval(kPi, 3, 64);
  const auto field = observe(SpectralState::single_mode(3, 0, 3.0, 4.0), d,
                             ObservationSelector::direction(0.6, 0.8));
  for (int c = 0; c < 64; ++c) EXPECT_NEAR(field.primary[c], 5.0 * d.basis()(0, c), 1e-14);
  EXPECT_THROW(ObservationSelector::direction(0.0, 0.0), InvalidArgument);
}

TEST(Semigroup, ObservedTraceOfFirstMode) {
  const auto d = SpectralDomain::interval(kPi, 4, 512);
  const SpatialMask all = SpatialMask::full(d.grid());
  const PhysicalParams params(1.0, 1.0);
  EXPECT_EQ(observed_trace_l1(SpectralState(4), d, params, ObservationSelector::first(), 0.3, all),
            0.0);
  const double v = observed_trace_l1(SpectralState::single_mode(4, 0, 1.0, 0.0), d, params,
                                     ObservationSelector::first(), 0.0, all);
  EXPECT_NEAR(v, 2.0 * std::sqrt(2.0 / kPi), 1e-3);
  const auto other = SpectralDomain::interval(kPi, 4, 256);
  EXPECT_THROW(observed_trace_l1(SpectralState(4), d, params, ObservationSelector::first(), 0.0,
                                 SpatialMask::full(other.grid())),
               InvalidArgument);
}

TEST(Semigroup, ParsevalAgainstGrid) {
  const auto d = SpectralDomain::rectangle(kPi, kPi, 20);
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(case_seed(21, trial));
    const SpectralState z = random_state(rng, 20).scaled(2.5);
    EXPECT_NEAR(grid_l2_norm(z, d), z.norm(), 1e-3 * z.norm());
  }
}

TEST(Semigroup, FullSelectorNeverCancels) {
  const auto d = SpectralDomain::interval(kPi, 6, 512);
  const SpatialMask all = SpatialMask::full(d.grid());
  const PhysicalParams params(1.0, 1.0);
  const int j = 5;
  const SpectralState z = SpectralState::single_mode(6, j, 0.6, -0.8);
  double e_l1 = 0.0;
  for (int c = 0; c < d.n_cells(); ++c) e_l1 += std::abs(d.basis()(j, c)) * d.cell_volume();
  for (double t = 0.0; t < 1.0; t += 0.01) {
    const double full = observed_trace_l1(z, d, params, ObservationSelector::full(), t, all);
    const double decay = std::exp(-params.a * d.eigenvalue(j) * t);
    EXPECT_NEAR(full, decay * e_l1, 1e-12 * decay);
  }
}

TEST(Semigroup, FlattenRoundTrip) {
  Rng rng(4);
  const SpectralState z = random_state(rng, 7);
  const SpectralState w = SpectralState::unflatten(z.flatten());
  for (int j = 0; j < 7; ++j) EXPECT_EQ(z[j], w[j]);
  EXPECT_THROW(SpectralState::unflatten(Eigen::VectorXd::Zero(3)), InvalidArgument);
}
