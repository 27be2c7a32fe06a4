#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace obslab {

enum class DomainKind { Interval, Rectangle };

// Uniform cell grid over an interval (0, length_x) or a rectangle
// (0, length_x) x (0, length_y). Cells are indexed row-major: iy * cells_x + ix.
struct SpatialGrid {
  int dimension = 1;
  int cells_x = 0;
  int cells_y = 1;
  double length_x = 0.0;
  double length_y = 0.0;

  int n_cells() const { return cells_x * cells_y; }
  double spacing_x() const { return length_x / cells_x; }
  double spacing_y() const { return dimension == 1 ? 0.0 : length_y / cells_y; }
  double cell_volume() const;
  double volume() const;
  // Midpoint of a cell; the second coordinate is 0 in one dimension.
  std::array<double, 2> center(int cell) const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;
};

// One Dirichlet mode: e(x, y) = sqrt(2/lx) sin(j pi x / lx) [* sqrt(2/ly) sin(k pi y / ly)].
struct Mode {
  double eigenvalue = 0.0;
  int j = 1;
  int k = 0;  // 0 for intervals
};

// Closed-form Dirichlet spectrum of -Laplace on an interval or rectangle,
// truncated to n_modes, together with the eigenfunctions sampled at the grid
// midpoints. Immutable; copies share the sampled basis.
class SpectralDomain {
 public:
  static constexpr int kDefaultIntervalModes = 32;
  static constexpr int kDefaultRectangleModes = 64;
  static constexpr int kDefaultIntervalCells = 512;
  static constexpr int kDefaultRectangleCells = 128;

  static SpectralDomain interval(double length, int n_modes = kDefaultIntervalModes,
                                 int cells = kDefaultIntervalCells);
  static SpectralDomain rectangle(double length_x, double length_y,
                                  int n_modes = kDefaultRectangleModes,
                                  int cells_x = kDefaultRectangleCells,
                                  int cells_y = kDefaultRectangleCells);

  DomainKind kind() const { return data_->kind; }
  int dimension() const { return data_->grid.dimension; }
  const SpatialGrid& grid() const { return data_->grid; }
  int n_modes() const { return static_cast<int>(data_->modes.size()); }
  const std::vector<Mode>& modes() const { return data_->modes; }
  double eigenvalue(int i) const { return data_->modes[i].eigenvalue; }
  // Smallest eigenvalue not held by the truncation.
  double next_eigenvalue() const { return data_->next_eigenvalue; }
  double volume() const { return data_->grid.volume(); }
  double cell_volume() const { return data_->grid.cell_volume(); }
  int n_cells() const { return data_->grid.n_cells(); }

  // Exact evaluation of the i-th (0-based) normalized eigenfunction.
  double eigenfunction(int i, double x, double y = 0.0) const;

  // n_modes x n_cells matrix of eigenfunction values at cell midpoints.
  const Eigen::MatrixXd& basis() const { return data_->basis; }

  // Midpoint-rule inner product of two stored modes.
  double grid_inner_product(int i, int j) const;

  // Same domain with a different truncation and/or grid resolution.
  SpectralDomain with_modes(int n_modes) const;

 private:
  struct Data {
    DomainKind kind = DomainKind::Interval;
    SpatialGrid grid;
    std::vector<Mode> modes;
    double next_eigenvalue = 0.0;
    Eigen::MatrixXd basis;
  };
  explicit SpectralDomain(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static std::shared_ptr<const Data> build(DomainKind kind, SpatialGrid grid, int n_modes);

  std::shared_ptr<const Data> data_;
};

// Diffusion a > 0 and coupling b != 0 of the generator with matrix [[a, -b], [b, a]].
struct PhysicalParams {
  PhysicalParams(double a, double b);

  double a;
  double b;

  std::array<std::array<double, 2>, 2> coupling_matrix() const { return {{{a, -b}, {b, a}}}; }
  double trace() const { return 2.0 * a; }
  double determinant() const { return a * a + b * b; }
};

// k_lambda: number of stored eigenvalues <= lambda. Requires lambda > lambda_1
// and that every eigenvalue <= lambda is stored.
int count_below(const SpectralDomain& domain, double lambda);

// k_lambda / lambda^{d/2}.
double weyl_ratio(const SpectralDomain& domain, double lambda);

}  // namespace obslab
