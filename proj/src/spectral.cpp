#include "obslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "obslab/errors.hpp"

namespace obslab {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative slack when comparing eigenvalues that are equal in exact arithmetic.
constexpr double kTieTolerance = 1e-12;

bool eigen_less(const Mode& lhs, const Mode& rhs) {
  const double scale = std::max(std::abs(lhs.eigenvalue), std::abs(rhs.eigenvalue));
  if (std::abs(lhs.eigenvalue - rhs.eigenvalue) > kTieTolerance * scale) {
    return lhs.eigenvalue < rhs.eigenvalue;
  }
  if (lhs.j != rhs.j) return lhs.j < rhs.j;
  return lhs.k < rhs.k;
}

}  // namespace

double SpatialGrid::cell_volume() const {
  if (dimension == 1) return length_x / cells_x;
  return (length_x / cells_x) * (length_y / cells_y);
}

double SpatialGrid::volume() const { return dimension == 1 ? length_x : length_x * length_y; }

std::array<double, 2> SpatialGrid::center(int cell) const {
  const int ix = cell % cells_x;
  const int iy = cell / cells_x;
  const double x = (ix + 0.5) * spacing_x();
  const double y = dimension == 1 ? 0.0 : (iy + 0.5) * spacing_y();
  return {x, y};
}

SpectralDomain SpectralDomain::interval(double length, int n_modes, int cells) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("interval length must be positive and finite");
  }
  if (cells < 1) throw InvalidArgument("interval grid needs at least one cell");
  SpatialGrid grid;
  grid.dimension = 1;
  grid.cells_x = cells;
  grid.cells_y = 1;
  grid.length_x = length;
  grid.length_y = 0.0;
  return SpectralDomain(build(DomainKind::Interval, grid, n_modes));
}

SpectralDomain SpectralDomain::rectangle(double length_x, double length_y, int n_modes,
                                         int cells_x, int cells_y) {
  if (!(length_x > 0.0) || !(length_y > 0.0) || !std::isfinite(length_x) ||
      !std::isfinite(length_y)) {
    throw InvalidArgument("rectangle side lengths must be positive and finite");
  }
  if (cells_x < 1 || cells_y < 1) throw InvalidArgument("rectangle grid needs cells on both axes");
  SpatialGrid grid;
  grid.dimension = 2;
  grid.cells_x = cells_x;
  grid.cells_y = cells_y;
  grid.length_x = length_x;
  grid.length_y = length_y;
  return SpectralDomain(build(DomainKind::Rectangle, grid, n_modes));
}

std::shared_ptr<const SpectralDomain::Data> SpectralDomain::build(DomainKind kind,
                                                                  SpatialGrid grid,
                                                                  int n_modes) {
  if (n_modes < 1) throw InvalidArgument("n_modes must be at least 1");
  auto data = std::make_shared<Data>();
  data->kind = kind;
  data->grid = grid;

  const double lx = grid.length_x;
  const double ly = grid.length_y;
  if (kind == DomainKind::Interval) {
    for (int j = 1; j <= n_modes; ++j) {
      const double w = j * kPi / lx;
      data->modes.push_back({w * w, j, 0});
    }
    const double w = (n_modes + 1) * kPi / lx;
    data->next_eigenvalue = w * w;
  } else {
    // The n+1 smallest pairs all have j, k <= n + 1.
    std::vector<Mode> candidates;
    const int limit = n_modes + 1;
    candidates.reserve(static_cast<std::size_t>(limit) * limit);
    for (int j = 1; j <= limit; ++j) {
      for (int k = 1; k <= limit; ++k) {
        const double wx = j * kPi / lx;
        const double wy = k * kPi / ly;
        candidates.push_back({wx * wx + wy * wy, j, k});
      }
    }
    std::partial_sort(candidates.begin(), candidates.begin() + limit, candidates.end(),
                      eigen_less);
    data->modes.assign(candidates.begin(), candidates.begin() + n_modes);
    data->next_eigenvalue = candidates[n_modes].eigenvalue;
  }

  const int cells = grid.n_cells();
  data->basis.resize(n_modes, cells);
  const double nx = std::sqrt(2.0 / lx);
  const double ny = kind == DomainKind::Interval ? 1.0 : std::sqrt(2.0 / ly);
  for (int i = 0; i < n_modes; ++i) {
    const Mode& m = data->modes[i];
    for (int c = 0; c < cells; ++c) {
      const auto p = grid.center(c);
      double v = nx * std::sin(m.j * kPi * p[0] / lx);
      if (kind == DomainKind::Rectangle) v *= ny * std::sin(m.k * kPi * p[1] / ly);
      data->basis(i, c) = v;
    }
  }
  return data;
}

double SpectralDomain::eigenfunction(int i, double x, double y) const {
  if (i < 0 || i >= n_modes()) throw InvalidArgument("mode index out of range");
  const Mode& m = data_->modes[i];
  const auto& g = data_->grid;
  double v = std::sqrt(2.0 / g.length_x) * std::sin(m.j * kPi * x / g.length_x);
  if (data_->kind == DomainKind::Rectangle) {
    v *= std::sqrt(2.0 / g.length_y) * std::sin(m.k * kPi * y / g.length_y);
  }
  return v;
}

double SpectralDomain::grid_inner_product(int i, int j) const {
  return data_->basis.row(i).dot(data_->basis.row(j)) * cell_volume();
}

SpectralDomain SpectralDomain::with_modes(int n_modes) const {
  return SpectralDomain(build(data_->kind, data_->grid, n_modes));
}

PhysicalParams::PhysicalParams(double a_in, double b_in) : a(a_in), b(b_in) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("diffusion a must be positive");
  if (b == 0.0 || !std::isfinite(b)) throw InvalidArgument("coupling b must be nonzero");
}

int count_below(const SpectralDomain& domain, double lambda) {
  const double first = domain.eigenvalue(0);
  if (!(lambda > first)) {
    throw InvalidArgument("count_below needs lambda > lambda_1 = " + std::to_string(first));
  }
  const double cut = lambda * (1.0 + kTieTolerance);
  if (domain.next_eigenvalue() <= cut) {
    throw InsufficientTruncation("truncation of " + std::to_string(domain.n_modes()) +
                                 " modes cannot count eigenvalues up to " +
                                 std::to_string(lambda));
  }
  const auto& modes = domain.modes();
  return static_cast<int>(std::count_if(modes.begin(), modes.end(),
                                        [cut](const Mode& m) { return m.eigenvalue <= cut; }));
}

double weyl_ratio(const SpectralDomain& domain, double lambda) {
  const int k = count_below(domain, lambda);
  return k / std::pow(lambda, domain.dimension() / 2.0);
}

}  // namespace obslab
