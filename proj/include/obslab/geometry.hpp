#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "obslab/masks.hpp"
#include "obslab/spectral.hpp"

namespace obslab {

// Boolean occupancy over (spatial cells) x (time cells) on Omega x (0, T).
// Row k holds the spatial mask of the k-th time cell.
class SpaceTimeSet {
 public:
  SpaceTimeSet() = default;
  SpaceTimeSet(SpatialGrid grid, int time_cells, double horizon, std::vector<std::uint8_t> mask);

  static SpaceTimeSet full(const SpatialGrid& grid, int time_cells, double horizon);
  static SpaceTimeSet none(const SpatialGrid& grid, int time_cells, double horizon);
  // Cells whose midpoint (x, y, t) satisfies the predicate.
  template <typename Predicate>
  static SpaceTimeSet where(const SpatialGrid& grid, int time_cells, double horizon,
                            Predicate&& predicate);

  const SpatialGrid& grid() const { return grid_; }
  int time_cells() const { return time_cells_; }
  int space_cells() const { return grid_.n_cells(); }
  double horizon() const { return horizon_; }
  double time_step() const { return horizon_ / time_cells_; }
  double time_center(int k) const { return (k + 0.5) * time_step(); }
  double cell_measure() const { return grid_.cell_volume() * time_step(); }

  bool at(int time_cell, int space_cell) const {
    return mask_[static_cast<std::size_t>(time_cell) * space_cells() + space_cell] != 0;
  }
  void set(int time_cell, int space_cell, bool value) {
    mask_[static_cast<std::size_t>(time_cell) * space_cells() + space_cell] = value ? 1 : 0;
  }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  std::int64_t count() const;
  double measure() const { return count() * cell_measure(); }
  // Spatial mask of the k-th time row.
  SpatialMask row(int time_cell) const;
  double row_measure(int time_cell) const;
  bool is_subset_of(const SpaceTimeSet& other) const;
  SpaceTimeSet intersect(const SpaceTimeSet& other) const;

 private:
  SpatialGrid grid_;
  int time_cells_ = 0;
  double horizon_ = 0.0;
  std::vector<std::uint8_t> mask_;
};

template <typename Predicate>
SpaceTimeSet SpaceTimeSet::where(const SpatialGrid& grid, int time_cells, double horizon,
                                 Predicate&& predicate) {
  SpaceTimeSet s = none(grid, time_cells, horizon);
  for (int k = 0; k < time_cells; ++k) {
    const double t = s.time_center(k);
    for (int c = 0; c < grid.n_cells(); ++c) {
      const auto p = grid.center(c);
      if (predicate(p[0], p[1], t)) s.set(k, c, true);
    }
  }
  return s;
}

// Closed ball in R^d (d = 1: an interval).
struct Ball {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.0;

  double volume(int dimension) const;
  // Whole-cell containment: every point of the cell lies in the ball.
  bool contains_cell(const SpatialGrid& grid, int cell) const;
};

// Smallest ball holding the whole domain.
Ball enclosing_ball(const SpatialGrid& grid);

struct Slice {
  int time_cell = 0;
  SpatialMask mask;
  double measure = 0.0;
};

// D_t for 0 < t < T, snapped to the time cell containing t.
Slice slice(const SpaceTimeSet& set, double t);

struct GoodTimeSet {
  TimeMask times;     // E = {t : |D_t| >= |D| / (2T)}
  double threshold;   // |D| / (2T)
  double lower_bound; // |D| / (2 |B_R|)
};

// E-set of a space-time set whose spatial support lies in `ball`. Asserts
// |E| >= |D| / (2|B_R|) and chi_E chi_{D_t} <= chi_D before returning.
GoodTimeSet good_time_set(const SpaceTimeSet& set, const Ball& ball);

// Default radius ladder {T/8, T/16, T/32, T/64}.
std::vector<double> default_density_radii(double horizon);

// min over radii of |E cap (l - r, l + r)| / (2r) at a time l.
double density_proxy(const TimeMask& set, double point, const std::vector<double>& radii);

struct DensityPoint {
  double time;
  double proxy;
};

// Midpoint of an occupied cell maximizing the density proxy (earliest on ties).
DensityPoint find_density_point(const TimeMask& set);
DensityPoint find_density_point(const TimeMask& set, const std::vector<double>& radii);

// l_{m+1} = l + mu^{-m} (l_1 - l), certified by l_m - l_{m+1} <= 3 |E cap (l_{m+1}, l_m)|.
struct DensitySequence {
  double point = 0.0;  // l
  double first = 0.0;  // l_1
  double mu = 0.0;
  double beta = 0.0;   // 0 when mu was given directly
  int certified_depth = 0;
  std::vector<double> terms;  // terms[m - 1] = l_m

  double term(int m) const { return terms.at(m - 1); }
};

double mu_from_beta(double beta);

// Builds l_1..l_{depth + 2} and certifies rings m = 1..depth; throws
// ResolutionError when a certificate fails.
DensitySequence make_density_sequence(const TimeMask& set, double point, double first, double mu,
                                      int depth);

// Descending scan of l_1 from T - dt in steps of dt until every ring up to
// `depth` is certified.
DensitySequence telescoping_sequence(const TimeMask& set, double point, double beta, int depth);

// Largest-density space-time ball around an occupied cell: D^R = D cap B_R(x0, t0).
struct LocalizedSet {
  SpaceTimeSet set;
  std::array<double, 2> center{0.0, 0.0};
  double center_time = 0.0;
  double radius = 0.0;
  double density = 0.0;
  Ball spatial_ball;  // spatial projection, enlarged to whole cells
};

LocalizedSet localize(const SpaceTimeSet& set, double radius);

// Run-length text encoding: a header line followed by one line per time row.
std::string to_rle(const SpaceTimeSet& set);
SpaceTimeSet from_rle(const std::string& text);

}  // namespace obslab
