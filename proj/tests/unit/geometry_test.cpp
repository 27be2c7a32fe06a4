#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "obslab/errors.hpp"
#include "obslab/geometry.hpp"
#include "obslab/random.hpp"
#include "obslab/spectral.hpp"

using namespace obslab;

namespace {

constexpr double kPi = std::numbers::pi;

SpatialGrid interval_grid(int cells = 64) { return SpectralDomain::interval(kPi, 1, cells).grid(); }

}  // namespace

TEST(Geometry, MeasureIsCellCount) {
  const auto grid = interval_grid();
  Rng rng(1);
  const SpaceTimeSet d = random_space_time_set(rng, grid, 40, 2.0, 0.3);
  EXPECT_GE(d.measure(), 0.3 * grid.volume() * 2.0);
  EXPECT_DOUBLE_EQ(d.measure(), d.count() * grid.cell_volume() * (2.0 / 40));
  double by_rows = 0.0;
  for (int k = 0; k < d.time_cells(); ++k) by_rows += d.row_measure(k) * d.time_step();
  EXPECT_NEAR(by_rows, d.measure(), 1e-13);
}

TEST(Geometry, SliceOfFullCylinder) {
  const auto grid = interval_grid();
  const SpaceTimeSet d = SpaceTimeSet::full(grid, 16, 1.0);
  for (double t = 0.01; t < 1.0; t += 0.07) EXPECT_NEAR(slice(d, t).measure, kPi, 1e-12);
  EXPECT_THROW(slice(d, 0.0), InvalidArgument);
  EXPECT_THROW(slice(d, 1.0), InvalidArgument);
}

TEST(Geometry, SliceOutsideTimeSupportIsEmpty) {
  const auto grid = interval_grid();
  const SpaceTimeSet d = SpaceTimeSet::where(
      grid, 16, 1.0, [](double x, double, double t) { return std::abs(x - 1.5) < 0.5 && t < 0.5; });
  EXPECT_EQ(slice(d, 0.75).measure, 0.0);
  EXPECT_GT(slice(d, 0.25).measure, 0.0);
}

TEST(Geometry, CheckerboardSliceIsHalf) {
  const auto grid = interval_grid();
  const SpaceTimeSet d =
      SpaceTimeSet::where(grid, 8, 1.0, [&](double x, double, double t) {
        const int c = static_cast<int>(x / grid.spacing_x());
        const int k = static_cast<int>(t * 8);
        return (c + k) % 2 == 0;
      });
  for (double t = 0.05; t < 1.0; t += 0.1) {
    EXPECT_NEAR(slice(d, t).measure, kPi / 2, grid.cell_volume());
  }
}

TEST(Geometry, GoodTimeSetFullCylinder) {
  const auto grid = interval_grid();
  const SpaceTimeSet d = SpaceTimeSet::full(grid, 32, 2.0);
  const Ball ball = enclosing_ball(grid);
  EXPECT_NEAR(ball.radius, kPi / 2, 1e-15);
  const GoodTimeSet g = good_time_set(d, ball);
  EXPECT_NEAR(g.threshold, kPi / 2, 1e-12);
  EXPECT_EQ(g.times.count(), 32);
  EXPECT_NEAR(g.times.measure(), 2.0, 1e-12);
  EXPECT_NEAR(g.lower_bound, 1.0, 1e-12);
}

TEST(Geometry, GoodTimeSetEarlyTimes) {
  const auto grid = interval_grid();
  const SpaceTimeSet d =
      SpaceTimeSet::where(grid, 32, 1.0, [](double, double, double t) { return t < 0.25; });
  const GoodTimeSet g = good_time_set(d, enclosing_ball(grid));
  for (int k = 0; k < 32; ++k) EXPECT_EQ(g.times[k], g.times.center(k) < 0.25);
  EXPECT_GE(g.times.measure(), g.lower_bound);
}

TEST(Geometry, GoodTimeSetErrors) {
  const auto grid = interval_grid();
  EXPECT_THROW(good_time_set(SpaceTimeSet::none(grid, 8, 1.0), enclosing_ball(grid)),
               InvalidArgument);
  Ball small;
  small.center = {0.5, 0.0};
  small.radius = 0.3;
  EXPECT_THROW(good_time_set(SpaceTimeSet::full(grid, 8, 1.0), small), ContainmentError);
}

TEST(Geometry, GoodTimeSetPropertySweep) {
  const auto grid = interval_grid(128);
  const Ball ball = enclosing_ball(grid);
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(case_seed(77, trial));
    const SpaceTimeSet d = random_space_time_set(rng, grid, 24, 1.5, 0.02);
    const GoodTimeSet g = good_time_set(d, ball);
    ASSERT_GE(g.times.measure(), d.measure() / (2.0 * ball.volume(1)) * (1.0 - 1e-12));
    // Domination of integrals for a random nonnegative field.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double restricted = 0.0;
    double full = 0.0;
    for (int k = 0; k < d.time_cells(); ++k) {
      const SpatialMask row = d.row(k);
      for (int c = 0; c < d.space_cells(); ++c) {
        const double f = u(gen);
        if (g.times[k] && row[c]) restricted += f;
        if (d.at(k, c)) full += f;
      }
    }
    ASSERT_LE(restricted, full);
  }
}

TEST(Geometry, DensityPointOfFullInterval) {
  const TimeMask e = TimeMask::full(1.0, 256);
  const DensityPoint p = find_density_point(e);
  EXPECT_DOUBLE_EQ(p.proxy, 1.0);
  EXPECT_GT(p.time, 0.0);
  EXPECT_LT(p.time, 1.0);
}

TEST(Geometry, DensityPointOfHalfInterval) {
  const TimeMask e = TimeMask::from_intervals(1.0, 256, {{0.0, 0.5}});
  const DensityPoint p = find_density_point(e);
  EXPECT_GE(p.proxy, 0.5);
  EXPECT_LT(p.time, 0.5);
  // Near the right end of E the proxy is about 1/2.
  EXPECT_NEAR(density_proxy(e, 0.5 - 0.5 / 256, default_density_radii(1.0)), 0.5, 0.05);
}

TEST(Geometry, DensityPointOfTwoIntervals) {
  const TimeMask e = TimeMask::from_intervals(1.0, 512, {{0.1, 0.2}, {0.6, 0.9}});
  const DensityPoint p = find_density_point(e);
  EXPECT_GE(p.proxy, 0.5);
  EXPECT_TRUE(e[e.index_of(p.time)]);
  EXPECT_TRUE((p.time > 0.1 && p.time < 0.2) || (p.time > 0.6 && p.time < 0.9));
}

TEST(Geometry, DensityPointErrors) {
  EXPECT_THROW(find_density_point(TimeMask(1.0, std::vector<std::uint8_t>(16, 0))),
               InvalidArgument);
  // Every other cell: density 1/2 is out of reach only when cells are isolated
  // at the finest radius, which a single cell on a coarse grid forces.
  std::vector<std::uint8_t> sparse(64, 0);
  sparse[10] = 1;
  EXPECT_THROW(find_density_point(TimeMask(1.0, sparse), {0.25}), ResolutionError);
}

TEST(Geometry, GeometricSequenceOnFullSet) {
  const TimeMask e = TimeMask::full(1.0, 1024);
  const DensitySequence s = make_density_sequence(e, 0.0, 0.5, 2.0, 6);
  EXPECT_DOUBLE_EQ(s.term(1), 0.5);
  EXPECT_DOUBLE_EQ(s.term(2), 0.25);
  EXPECT_DOUBLE_EQ(s.term(3), 0.125);
  EXPECT_EQ(s.certified_depth, 6);
}

TEST(Geometry, BetaSequenceOnFullSet) {
  const TimeMask e = TimeMask::full(1.0, 1024);
  const double mu = mu_from_beta(2.0);
  EXPECT_NEAR(mu, std::sqrt(4.0 / 3.0), 1e-15);
  const DensitySequence s = make_density_sequence(e, 0.0, 0.5, mu, 6);
  for (int m = 1; m <= 8; ++m) EXPECT_NEAR(s.term(m), 0.5 * std::pow(mu, -(m - 1)), 1e-15);
  for (int m = 1; m <= 6; ++m) {
    const double gap = s.term(m) - s.term(m + 1);
    EXPECT_LE(gap, 3.0 * e.measure_between(s.term(m + 1), s.term(m)) * (1.0 + 1e-12));
  }
}

TEST(Geometry, SequenceSkipsAGap) {
  const TimeMask e = TimeMask::from_intervals(1.0, 1024, {{0.0, 0.6}, {0.95, 1.0}});
  const DensitySequence s = telescoping_sequence(e, 0.0, 2.0, 6);
  EXPECT_LT(s.first, 1.0 - e.step());
  for (int m = 1; m <= s.certified_depth; ++m) {
    const double gap = s.term(m) - s.term(m + 1);
    EXPECT_LE(gap, 3.0 * e.measure_between(s.term(m + 1), s.term(m)) * (1.0 + 1e-12));
  }
  for (int m = 1; m < static_cast<int>(s.terms.size()); ++m) EXPECT_LT(s.term(m + 1), s.term(m));
}

TEST(Geometry, SequenceErrors) {
  const TimeMask e = TimeMask::full(1.0, 64);
  EXPECT_THROW(make_density_sequence(e, 0.0, 0.5, 1.0, 4), InvalidArgument);
  EXPECT_THROW(make_density_sequence(e, 0.6, 0.5, 2.0, 4), InvalidArgument);
  const TimeMask gap = TimeMask::from_intervals(1.0, 1024, {{0.0, 0.3}});
  EXPECT_THROW(make_density_sequence(gap, 0.0, 0.9, 2.0, 4), ResolutionError);
}

TEST(Geometry, LocalizeFullSet) {
  const auto grid = interval_grid(128);
  const SpaceTimeSet d = SpaceTimeSet::full(grid, 64, 1.0);
  const LocalizedSet l = localize(d, 0.2);
  EXPECT_DOUBLE_EQ(l.density, 1.0);
  EXPECT_TRUE(l.set.is_subset_of(d));
  EXPECT_GT(l.set.count(), 0);
  EXPECT_GE(l.center[0] - 0.2, 0.0);
  EXPECT_LE(l.center[0] + 0.2, kPi);
  EXPECT_GE(l.center_time - 0.2, 0.0);
  EXPECT_LE(l.center_time + 0.2, 1.0);
  for (int k = 0; k < l.set.time_cells(); ++k) {
    for (int c = 0; c < l.set.space_cells(); ++c) {
      if (l.set.at(k, c)) {
        EXPECT_TRUE(l.spatial_ball.contains_cell(grid, c));
      }
    }
  }
}

TEST(Geometry, RleRoundTrip) {
  const auto rect = SpectralDomain::rectangle(kPi, 2.0, 1, 12, 7).grid();
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(case_seed(31, trial));
    const auto& grid = trial % 2 ? rect : interval_grid(50);
    const SpaceTimeSet d = random_space_time_set(rng, grid, 9, 0.7 + trial, 0.2);
    const SpaceTimeSet back = from_rle(to_rle(d));
    EXPECT_TRUE(back.grid() == d.grid());
    EXPECT_EQ(back.time_cells(), d.time_cells());
    EXPECT_EQ(back.horizon(), d.horizon());
    EXPECT_EQ(back.mask(), d.mask());
    EXPECT_EQ(to_rle(back), to_rle(d));
  }
  EXPECT_THROW(from_rle("not a header\n"), InvalidArgument);
  EXPECT_THROW(from_rle(""), InvalidArgument);
}
