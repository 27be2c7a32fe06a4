#include "obslab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "obslab/errors.hpp"

namespace obslab {

std::uint64_t case_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrigPoly random_trig_poly(Rng& rng, int max_degree) {
  if (max_degree < 0) throw InvalidArgument("max degree must be nonnegative");
  const int n = std::uniform_int_distribution<int>(0, max_degree)(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
  std::vector<double> a(n + 1);
  std::vector<double> b(n + 1);
  for (int k = 0; k <= n; ++k) {
    a[k] = k == 0 ? 0.0 : scale * normal(rng);
    b[k] = scale * normal(rng);
  }
  return TrigPoly(std::move(a), std::move(b));
}

AngleMask random_angle_set(Rng& rng, int cells, int max_intervals, double min_measure) {
  if (max_intervals < 1) throw InvalidArgument("need at least one interval");
  if (!(min_measure < 2.0 * std::numbers::pi)) throw InvalidArgument("min measure too large");
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (;;) {
    const int k = std::uniform_int_distribution<int>(1, max_intervals)(rng);
    std::vector<std::pair<double, double>> intervals;
    for (int i = 0; i < k; ++i) {
      double lo = angle(rng);
      double hi = angle(rng);
      if (hi < lo) std::swap(lo, hi);
      intervals.emplace_back(lo, hi);
    }
    AngleMask m = AngleMask::from_intervals(intervals, cells);
    if (m.measure() >= min_measure) return m;
  }
}

SineBoundCase random_sine_case(Rng& rng, double max_window) {
  if (!(max_window > 0.0)) throw InvalidArgument("max window must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double lambda = 1.0 + 49.0 * unit(rng);
    const double b = 0.1 + 1.9 * unit(rng);
    const double window = max_window * std::max(1e-4, unit(rng));
    const double horizon = window / (lambda * b);
    const double delta = std::numbers::pi * (unit(rng) - 0.5);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<std::pair<double, double>> intervals;
    for (int i = 0; i < k; ++i) {
      // Mix wide intervals with narrow ones around a zero of sin.
      if (unit(rng) < 0.3) {
        const double zero = std::ceil(delta / std::numbers::pi) * std::numbers::pi;
        const double r = 0.05 * unit(rng) + 1e-3;
        intervals.emplace_back(zero - r, zero + r);
      } else {
        double lo = delta + window * unit(rng);
        double hi = delta + window * unit(rng);
        if (hi < lo) std::swap(lo, hi);
        intervals.emplace_back(lo, hi);
      }
    }
    SineBoundCase c = SineBoundCase::from_intervals(lambda, b, horizon, delta, intervals, 2048);
    if (c.measure() > 0.0) return c;
  }
}

SpectralState random_state(Rng& rng, int n_modes) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralState s(n_modes);
  for (int j = 0; j < n_modes; ++j) s[j] = {normal(rng), normal(rng)};
  const double norm = s.norm();
  return norm > 0.0 ? s.scaled(1.0 / norm) : random_state(rng, n_modes);
}

SpaceTimeSet random_space_time_set(Rng& rng, const SpatialGrid& grid, int time_cells,
                                   double horizon, double min_fraction) {
  if (!(min_fraction > 0.0 && min_fraction <= 1.0)) {
    throw InvalidArgument("min fraction must lie in (0, 1]");
  }
  SpaceTimeSet set = SpaceTimeSet::none(grid, time_cells, horizon);
  const std::int64_t total = static_cast<std::int64_t>(time_cells) * grid.n_cells();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto span = [&](int n) {
    const int width = std::max(1, static_cast<int>(std::ceil(n * (0.1 + 0.5 * unit(rng)))));
    const int start = std::uniform_int_distribution<int>(0, n - width)(rng);
    return std::pair<int, int>(start, start + width);
  };
  while (static_cast<double>(set.count()) < min_fraction * static_cast<double>(total)) {
    const auto [x0, x1] = span(grid.cells_x);
    const auto [y0, y1] = span(grid.cells_y);
    const auto [t0, t1] = span(time_cells);
    for (int k = t0; k < t1; ++k) {
      for (int iy = y0; iy < y1; ++iy) {
        for (int ix = x0; ix < x1; ++ix) set.set(k, iy * grid.cells_x + ix, true);
      }
    }
  }
  return set;
}

}  // namespace obslab
