#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "obslab/spectral.hpp"

namespace obslab {

// Union of spatial grid cells. Measures are exact cell counts times the cell volume.
class SpatialMask {
 public:
  SpatialMask() = default;
  SpatialMask(SpatialGrid grid, std::vector<std::uint8_t> cells);

  static SpatialMask full(const SpatialGrid& grid);
  static SpatialMask none(const SpatialGrid& grid);
  // Cells whose midpoint satisfies the predicate.
  static SpatialMask where(const SpatialGrid& grid,
                           const std::function<bool(double, double)>& predicate);

  const SpatialGrid& grid() const { return grid_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  int size() const { return static_cast<int>(cells_.size()); }
  bool operator[](int cell) const { return cells_[cell] != 0; }
  int count() const;
  double measure() const { return count() * grid_.cell_volume(); }
  bool empty() const { return count() == 0; }
  bool is_subset_of(const SpatialMask& other) const;

 private:
  SpatialGrid grid_;
  std::vector<std::uint8_t> cells_;
};

// Union of cells of a uniform grid on (0, horizon).
class TimeMask {
 public:
  TimeMask() = default;
  TimeMask(double horizon, std::vector<std::uint8_t> cells);

  static TimeMask full(double horizon, int n_cells);
  // Cells whose midpoint lies in one of the open intervals.
  static TimeMask from_intervals(double horizon, int n_cells,
                                 const std::vector<std::pair<double, double>>& intervals);

  int size() const { return static_cast<int>(cells_.size()); }
  double horizon() const { return horizon_; }
  double step() const { return horizon_ / size(); }
  double center(int k) const { return (k + 0.5) * step(); }
  bool operator[](int k) const { return cells_[k] != 0; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  int count() const;
  double measure() const { return count() * step(); }
  // |E cap (lo, hi)| with partial cells counted by overlap length.
  double measure_between(double lo, double hi) const;
  // Cell containing t (the cell whose midpoint is nearest), clamped to the grid.
  int index_of(double t) const;

 private:
  double horizon_ = 0.0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace obslab
