#include "obslab/masks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obslab/errors.hpp"

namespace obslab {

SpatialMask::SpatialMask(SpatialGrid grid, std::vector<std::uint8_t> cells)
    : grid_(grid), cells_(std::move(cells)) {
  if (static_cast<int>(cells_.size()) != grid_.n_cells()) {
    throw InvalidArgument("spatial mask size does not match the grid");
  }
}

SpatialMask SpatialMask::full(const SpatialGrid& grid) {
  return SpatialMask(grid, std::vector<std::uint8_t>(grid.n_cells(), 1));
}

SpatialMask SpatialMask::none(const SpatialGrid& grid) {
  return SpatialMask(grid, std::vector<std::uint8_t>(grid.n_cells(), 0));
}

SpatialMask SpatialMask::where(const SpatialGrid& grid,
                               const std::function<bool(double, double)>& predicate) {
  std::vector<std::uint8_t> cells(grid.n_cells());
  for (int c = 0; c < grid.n_cells(); ++c) {
    const auto p = grid.center(c);
    cells[c] = predicate(p[0], p[1]) ? 1 : 0;
  }
  return SpatialMask(grid, std::move(cells));
}

int SpatialMask::count() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool SpatialMask::is_subset_of(const SpatialMask& other) const {
  if (!(grid_ == other.grid_)) return false;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c] && !other.cells_[c]) return false;
  }
  return true;
}

TimeMask::TimeMask(double horizon, std::vector<std::uint8_t> cells)
    : horizon_(horizon), cells_(std::move(cells)) {
  if (!(horizon_ > 0.0)) throw InvalidArgument("time horizon must be positive");
  if (cells_.empty()) throw InvalidArgument("time mask needs at least one cell");
  for (auto& c : cells_) c = c ? 1 : 0;
}

TimeMask TimeMask::full(double horizon, int n_cells) {
  return TimeMask(horizon, std::vector<std::uint8_t>(std::max(n_cells, 0), 1));
}

TimeMask TimeMask::from_intervals(double horizon, int n_cells,
                                  const std::vector<std::pair<double, double>>& intervals) {
  std::vector<std::uint8_t> cells(std::max(n_cells, 0), 0);
  const double dt = horizon / n_cells;
  for (int k = 0; k < n_cells; ++k) {
    const double t = (k + 0.5) * dt;
    for (const auto& [lo, hi] : intervals) {
      if (t > lo && t < hi) {
        cells[k] = 1;
        break;
      }
    }
  }
  return TimeMask(horizon, std::move(cells));
}

int TimeMask::count() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double TimeMask::measure_between(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  const double dt = step();
  const int first = std::clamp(static_cast<int>(std::floor(lo / dt)), 0, size() - 1);
  const int last = std::clamp(static_cast<int>(std::floor(hi / dt)), 0, size() - 1);
  double total = 0.0;
  for (int k = first; k <= last; ++k) {
    if (!cells_[k]) continue;
    const double a = std::max(lo, k * dt);
    const double b = std::min(hi, (k + 1) * dt);
    if (b > a) total += b - a;
  }
  return total;
}

int TimeMask::index_of(double t) const {
  return std::clamp(static_cast<int>(std::floor(t / step())), 0, size() - 1);
}

}  // namespace obslab
