#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"
#include "obslab/remez.hpp"

using namespace obslab;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense scan of |f| over the closure of the mask cells.
double brute_sup(const TrigPoly& f, const AngleMask& e, int per_cell = 64) {
  double best = 0.0;
  for (int k = 0; k < e.size(); ++k) {
    if (!e[k]) continue;
    for (int i = 0; i <= per_cell; ++i) {
      best = std::max(best, std::abs(f(e.left(k) + e.step() * i / per_cell)));
    }
  }
  return best;
}

}  // namespace

TEST(TrigPoly, EvaluationMatchesDirectSum) {
  const TrigPoly f({0.0, 0.5, -1.0, 0.25}, {2.0, 0.0, 0.3, -0.7});
  EXPECT_EQ(f.degree(), 3);
  for (double t = -kPi; t <= kPi; t += 0.01) {
    const double direct = 2.0 + 0.5 * std::sin(t) - std::sin(2 * t) + 0.25 * std::sin(3 * t) +
                          0.3 * std::cos(2 * t) - 0.7 * std::cos(3 * t);
    EXPECT_NEAR(f(t), direct, 1e-13);
  }
}

TEST(TrigPoly, SupNormAgainstDenseScan) {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(case_seed(17, trial));
    const TrigPoly f = random_trig_poly(rng, 8);
    if (f.is_zero()) continue;
    double dense = 0.0;
    for (int i = 0; i <= 200000; ++i) dense = std::max(dense, std::abs(f(-kPi + 2 * kPi * i / 200000)));
    EXPECT_GE(f.sup_norm(), dense * (1.0 - 1e-12));
    EXPECT_LE(f.sup_norm() - dense, 1e-6 * dense);
  }
}

TEST(Remez, ConstantOnQuarterCircle) {
  const TrigPoly one = TrigPoly::constant(1.0);
  const AngleMask e = AngleMask::from_intervals({{0.0, kPi / 2}});
  EXPECT_NEAR(e.measure(), kPi / 2, 1e-12);
  const InequalityCheck c = remez_check(one, e, 1.0);
  EXPECT_NEAR(c.lhs, 2 * kPi, 1e-12);
  const double oracle = std::pow(64.0 / std::sin(kPi / 8), 2.0) * (kPi / 2);
  EXPECT_NEAR(c.rhs, oracle, 1e-9 * oracle);
  EXPECT_NEAR(c.rhs, 4.39e4, 0.01e4);
  EXPECT_TRUE(c.holds);
}

TEST(Remez, FullSetConstant) {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(case_seed(8, trial));
    const TrigPoly f = random_trig_poly(rng, 6);
    if (f.is_zero()) continue;
    for (double p : {1.0, 2.0, 3.5}) {
      const InequalityCheck c = remez_check(f, AngleMask::full(), p);
      EXPECT_TRUE(c.holds);
      const double log_constant = 2.0 * (f.degree() + 1.0 / p) * std::log(64.0);
      EXPECT_NEAR(c.log_rhs - c.log_lhs, log_constant, 1e-9);
    }
  }
}

TEST(Remez, Errors) {
  const TrigPoly f = TrigPoly::cosine(2);
  EXPECT_THROW(remez_check(f, AngleMask(std::vector<std::uint8_t>(64, 0)), 1.0), InvalidArgument);
  EXPECT_THROW(remez_check(f, AngleMask::full(), 0.5), InvalidArgument);
}

TEST(Remez, ScalingCovariance) {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng(case_seed(41, trial));
    const TrigPoly f = random_trig_poly(rng, 8);
    if (f.is_zero()) continue;
    const AngleMask e = random_angle_set(rng, 4096, 5, 0.1);
    const InequalityCheck base = remez_check(f, e, 2.0);
    for (double c : {-1.0, 0.25, 8.0, -1024.0}) {
      const InequalityCheck s = remez_check(f.scaled(c), e, 2.0);
      EXPECT_EQ(s.holds, base.holds);
      EXPECT_NEAR(s.ratio(), base.ratio(), 1e-12 * base.ratio());
    }
    for (double c : {-3.7, 1e-5, 12345.0}) {
      const InequalityCheck s = remez_check(f.scaled(c), e, 1.0);
      EXPECT_EQ(s.holds, remez_check(f, e, 1.0).holds);
      EXPECT_NEAR(s.ratio(), remez_check(f, e, 1.0).ratio(),
                  1e-12 * remez_check(f, e, 1.0).ratio());
    }
  }
}

TEST(Remez, SweepHasNoViolations) {
  const SweepSummary s = remez_sweep(2000, 3);
  EXPECT_EQ(s.cases, 2000);
  EXPECT_EQ(s.violations, 0);
  EXPECT_GT(s.worst_ratio, 0.0);
  EXPECT_LT(s.worst_ratio, 1.0);
}

TEST(SupRemez, ConstantHoldsWithEquality) {
  const TrigPoly f = TrigPoly::constant(-2.5);
  const AngleMask e = AngleMask::from_intervals({{-1.0, 0.2}});
  const InequalityCheck c = sup_remez_check(f, e);
  EXPECT_DOUBLE_EQ(c.lhs, 2.5);
  EXPECT_DOUBLE_EQ(c.rhs, 2.5);
  EXPECT_TRUE(c.holds);
}

TEST(SupRemez, CosineNearItsZero) {
  const TrigPoly f = TrigPoly::cosine(1);
  const AngleMask e = AngleMask::from_intervals({{kPi / 2 - 0.1, kPi / 2 + 0.1}});
  const double sup_e = brute_sup(f, e);
  EXPECT_NEAR(sup_over(f, e), sup_e, 1e-9);
  EXPECT_NEAR(sup_e, std::sin(0.1), 2 * e.step());
  const InequalityCheck c = sup_remez_check(f, e);
  const double oracle = std::pow(2.0 / std::sin(e.measure() / 4), 2.0) * sup_e;
  EXPECT_NEAR(c.rhs, oracle, 1e-8 * oracle);
  EXPECT_NEAR(c.rhs, 160.0, 2.0);
  EXPECT_NEAR(c.lhs, 1.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(SupRemez, RandomSweep) {
  for (int trial = 0; trial < 300; ++trial) {
    Rng rng(case_seed(23, trial));
    const TrigPoly f = random_trig_poly(rng, 8);
    if (f.is_zero()) continue;
    const AngleMask e = random_angle_set(rng, 2048, 5, 0.1);
    EXPECT_TRUE(sup_remez_check(f, e).holds) << "trial " << trial;
  }
}

TEST(Sublevel, CosineClosedForm) {
  const SublevelCheck c = sublevel_measure_check(TrigPoly::cosine(1), 1.0);
  const double threshold = std::pow(0.5 * std::sin(0.25), 2.0);
  EXPECT_NEAR(c.threshold, threshold, 1e-15);
  EXPECT_NEAR(c.threshold, 0.0153022, 1e-7);
  // |cos| <= c on (-pi, pi): two windows of width 2 arcsin(c).
  EXPECT_NEAR(c.measure, 4.0 * std::asin(threshold), 1e-9);
  EXPECT_TRUE(c.holds);
}

TEST(Sublevel, ConstantAsDegreeOne) {
  const TrigPoly one({0.0, 0.0}, {1.0, 0.0});
  for (double eps : {0.1, 1.0, 6.0}) {
    const SublevelCheck c = sublevel_measure_check(one, eps);
    EXPECT_EQ(c.measure, 0.0);
    EXPECT_TRUE(c.holds);
  }
}

TEST(Sublevel, Errors) {
  EXPECT_THROW(sublevel_measure_check(TrigPoly::constant(1.0), 1.0), InvalidArgument);
  EXPECT_THROW(sublevel_measure_check(TrigPoly({0.0, 0.0}, {0.0, 0.0}), 1.0), InvalidArgument);
  EXPECT_THROW(sublevel_measure_check(TrigPoly::cosine(1), 0.0), InvalidArgument);
}

TEST(Sublevel, RandomSweep) {
  for (int trial = 0; trial < 300; ++trial) {
    Rng rng(case_seed(29, trial));
    TrigPoly f = random_trig_poly(rng, 8);
    if (f.is_zero() || f.degree() < 1) continue;
    for (double eps : {0.1, 0.5, 1.0}) {
      EXPECT_TRUE(sublevel_measure_check(f, eps, 2048).holds) << "trial " << trial;
    }
  }
}

TEST(SineBound, HalfPeriod) {
  const SineBoundCase c = SineBoundCase::from_intervals(1.0, 1.0, kPi, 0.0, {{0.0, kPi}});
  const InequalityCheck r = sine_integral_bound(c);
  EXPECT_NEAR(r.rhs, 2.0, 1e-12);
  const double lhs = std::pow(2.0, -50) * std::pow(1.5 * kPi, -4) * std::pow(kPi, 4);
  EXPECT_NEAR(r.lhs, lhs, 1e-12 * lhs);
  EXPECT_NEAR(r.lhs, 1.75e-16, 0.01e-16);
  EXPECT_TRUE(r.holds);
}

TEST(SineBound, SetAroundAZero) {
  const SineBoundCase c =
      SineBoundCase::from_intervals(1.0, 1.0, kPi, -kPi / 2, {{-0.01, 0.01}}, 4096);
  const InequalityCheck r = sine_integral_bound(c);
  const double f = c.measure();
  EXPECT_NEAR(f, 0.02, 2 * c.step());
  // int over (-f/2, f/2) of |sin| = 2 (1 - cos(f/2)).
  EXPECT_NEAR(r.rhs, 2.0 * (1.0 - std::cos(f / 2)), 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(SineBound, Errors) {
  SineBoundCase c = SineBoundCase::from_intervals(1.0, 1.0, 1.0, 0.0, {});
  EXPECT_THROW(sine_integral_bound(c), InvalidArgument);
  c = SineBoundCase::from_intervals(1.0, 1.0, 1.0, 2.0, {{2.0, 3.0}});
  EXPECT_THROW(sine_integral_bound(c), InvalidArgument);
}

TEST(SineBound, IntegralOfAbsSine) {
  EXPECT_NEAR(integral_abs_sin(0.0, kPi), 2.0, 1e-15);
  EXPECT_NEAR(integral_abs_sin(0.0, 10 * kPi), 20.0, 1e-12);
  EXPECT_NEAR(integral_abs_sin(-1.0, 1.0), 2.0 * (1.0 - std::cos(1.0)), 1e-15);
  EXPECT_NEAR(integral_abs_sin(1e-3, 2e-3), 2.0 * std::sin(1.5e-3) * std::sin(5e-4), 1e-20);
}

TEST(SineBound, MonotoneUnderEnlargement) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(case_seed(51, trial));
    const SineBoundCase small = random_sine_case(rng, 100.0);
    SineBoundCase big = small;
    std::bernoulli_distribution add(0.2);
    for (auto& cell : big.cells) {
      if (!cell && add(gen)) cell = 1;
    }
    EXPECT_GE(sine_integral_bound(big).rhs, sine_integral_bound(small).rhs);
  }
}

TEST(SineBound, SweepHasNoViolations) {
  const SweepSummary s = sine_bound_sweep(2000, 4);
  EXPECT_EQ(s.violations, 0);
  EXPECT_LT(s.worst_ratio, 1.0);
}
