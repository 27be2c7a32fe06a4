#include "obslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "obslab/errors.hpp"

namespace obslab {

namespace {

constexpr double kSlack = 1e-12;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SpaceTimeSet::SpaceTimeSet(SpatialGrid grid, int time_cells, double horizon,
                           std::vector<std::uint8_t> mask)
    : grid_(grid), time_cells_(time_cells), horizon_(horizon), mask_(std::move(mask)) {
  if (time_cells_ < 1) throw InvalidArgument("space-time set needs at least one time cell");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw InvalidArgument("time horizon must be positive");
  }
  if (mask_.size() != static_cast<std::size_t>(time_cells_) * grid_.n_cells()) {
    throw InvalidArgument("space-time mask size does not match the grids");
  }
  for (auto& v : mask_) v = v ? 1 : 0;
}

SpaceTimeSet SpaceTimeSet::full(const SpatialGrid& grid, int time_cells, double horizon) {
  return SpaceTimeSet(grid, time_cells, horizon,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(time_cells) *
                                                    grid.n_cells(),
                                                1));
}

SpaceTimeSet SpaceTimeSet::none(const SpatialGrid& grid, int time_cells, double horizon) {
  return SpaceTimeSet(grid, time_cells, horizon,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(time_cells) *
                                                    grid.n_cells(),
                                                0));
}

std::int64_t SpaceTimeSet::count() const {
  return std::count(mask_.begin(), mask_.end(), std::uint8_t{1});
}

SpatialMask SpaceTimeSet::row(int time_cell) const {
  if (time_cell < 0 || time_cell >= time_cells_) throw InvalidArgument("time cell out of range");
  const auto first = mask_.begin() + static_cast<std::ptrdiff_t>(time_cell) * space_cells();
  return SpatialMask(grid_, std::vector<std::uint8_t>(first, first + space_cells()));
}

double SpaceTimeSet::row_measure(int time_cell) const {
  const auto first = mask_.begin() + static_cast<std::ptrdiff_t>(time_cell) * space_cells();
  return std::count(first, first + space_cells(), std::uint8_t{1}) * grid_.cell_volume();
}

bool SpaceTimeSet::is_subset_of(const SpaceTimeSet& other) const {
  if (!(grid_ == other.grid_) || time_cells_ != other.time_cells_) return false;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !other.mask_[i]) return false;
  }
  return true;
}

SpaceTimeSet SpaceTimeSet::intersect(const SpaceTimeSet& other) const {
  if (!(grid_ == other.grid_) || time_cells_ != other.time_cells_) {
    throw InvalidArgument("cannot intersect space-time sets on different grids");
  }
  SpaceTimeSet out = *this;
  for (std::size_t i = 0; i < mask_.size(); ++i) out.mask_[i] = mask_[i] & other.mask_[i];
  return out;
}

double Ball::volume(int dimension) const {
  return dimension == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
}

bool Ball::contains_cell(const SpatialGrid& grid, int cell) const {
  const auto p = grid.center(cell);
  const double hx = 0.5 * grid.spacing_x();
  const double tol = kSlack * std::max(1.0, radius);
  if (grid.dimension == 1) {
    return p[0] - hx >= center[0] - radius - tol && p[0] + hx <= center[0] + radius + tol;
  }
  const double hy = 0.5 * grid.spacing_y();
  for (double sx : {-hx, hx}) {
    for (double sy : {-hy, hy}) {
      if (std::hypot(p[0] + sx - center[0], p[1] + sy - center[1]) > radius + tol) return false;
    }
  }
  return true;
}

Ball enclosing_ball(const SpatialGrid& grid) {
  if (grid.dimension == 1) return Ball{{0.5 * grid.length_x, 0.0}, 0.5 * grid.length_x};
  return Ball{{0.5 * grid.length_x, 0.5 * grid.length_y},
              0.5 * std::hypot(grid.length_x, grid.length_y)};
}

Slice slice(const SpaceTimeSet& set, double t) {
  if (!(t > 0.0 && t < set.horizon())) {
    throw InvalidArgument("slice time must lie in (0, T)");
  }
  const int k = std::clamp(static_cast<int>(std::floor(t / set.time_step())), 0,
                           set.time_cells() - 1);
  Slice s;
  s.time_cell = k;
  s.mask = set.row(k);
  s.measure = s.mask.measure();
  return s;
}

GoodTimeSet good_time_set(const SpaceTimeSet& set, const Ball& ball) {
  const std::int64_t total = set.count();
  if (total == 0) throw InvalidArgument("good_time_set needs a set of positive measure");

  const int n_space = set.space_cells();
  const int n_time = set.time_cells();
  std::vector<std::uint8_t> support(n_space, 0);
  std::vector<std::int64_t> row_counts(n_time, 0);
  for (int k = 0; k < n_time; ++k) {
    for (int c = 0; c < n_space; ++c) {
      if (set.at(k, c)) {
        support[c] = 1;
        ++row_counts[k];
      }
    }
  }
  for (int c = 0; c < n_space; ++c) {
    if (support[c] && !ball.contains_cell(set.grid(), c)) {
      throw ContainmentError("ball of radius " + format_double(ball.radius) +
                             " does not contain the spatial support of the set");
    }
  }

  // |D_k| >= |D| / (2T)  <=>  2 * n_time * count_k >= count, in exact integers.
  std::vector<std::uint8_t> e(n_time, 0);
  for (int k = 0; k < n_time; ++k) e[k] = 2 * n_time * row_counts[k] >= total ? 1 : 0;

  GoodTimeSet out{TimeMask(set.horizon(), std::move(e)), set.measure() / (2.0 * set.horizon()),
                  0.0};
  out.lower_bound = set.measure() / (2.0 * ball.volume(set.grid().dimension));

  if (out.times.measure() < out.lower_bound * (1.0 - kSlack)) {
    throw PropertyViolation("|E| = " + format_double(out.times.measure()) +
                            " is below |D|/(2|B_R|) = " + format_double(out.lower_bound));
  }
  for (int k = 0; k < n_time; ++k) {
    if (!out.times[k]) continue;
    for (int c = 0; c < n_space; ++c) {
      // chi_E(t) chi_{D_t}(x) <= chi_D(x, t): slices are rows of D.
      if (set.row(k)[c] && !set.at(k, c)) throw PropertyViolation("slice domination failed");
    }
  }
  return out;
}

std::vector<double> default_density_radii(double horizon) {
  return {horizon / 8.0, horizon / 16.0, horizon / 32.0, horizon / 64.0};
}

double density_proxy(const TimeMask& set, double point, const std::vector<double>& radii) {
  double proxy = 1.0;
  for (double r : radii) {
    proxy = std::min(proxy, set.measure_between(point - r, point + r) / (2.0 * r));
  }
  return proxy;
}

DensityPoint find_density_point(const TimeMask& set) {
  return find_density_point(set, default_density_radii(set.horizon()));
}

DensityPoint find_density_point(const TimeMask& set, const std::vector<double>& radii) {
  if (set.count() == 0) throw InvalidArgument("find_density_point needs a nonempty set");
  if (radii.empty()) throw InvalidArgument("density radius list is empty");
  DensityPoint best{0.0, -1.0};
  for (int k = 0; k < set.size(); ++k) {
    if (!set[k]) continue;
    const double t = set.center(k);
    const double p = density_proxy(set, t, radii);
    if (p > best.proxy + kSlack) best = {t, p};
  }
  if (best.proxy < 0.5 - kSlack) {
    throw ResolutionError("no grid point reaches density 1/2 at the finest radius; refine the grid");
  }
  return best;
}

double mu_from_beta(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  return std::sqrt((beta + 2.0) / (beta + 1.0));
}

DensitySequence make_density_sequence(const TimeMask& set, double point, double first, double mu,
                                      int depth) {
  if (!(mu > 1.0)) throw InvalidArgument("mu must exceed 1");
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  if (!(point < first && first < set.horizon())) {
    throw InvalidArgument("need l < l_1 < T");
  }
  DensitySequence seq;
  seq.point = point;
  seq.first = first;
  seq.mu = mu;
  seq.terms.reserve(depth + 2);
  seq.terms.push_back(first);
  for (int m = 1; m <= depth + 1; ++m) {
    seq.terms.push_back(point + std::pow(mu, -m) * (first - point));
  }
  for (int m = 1; m <= depth; ++m) {
    const double upper = seq.term(m);
    const double lower = seq.term(m + 1);
    const double gap = upper - lower;
    const double covered = set.measure_between(lower, upper);
    if (gap > 3.0 * covered * (1.0 + kSlack)) {
      throw ResolutionError("ring " + std::to_string(m) + " fails l_m - l_{m+1} <= 3|E cap ring|");
    }
  }
  seq.certified_depth = depth;
  return seq;
}

DensitySequence telescoping_sequence(const TimeMask& set, double point, double beta, int depth) {
  if (depth < 2) throw InvalidArgument("telescoping depth must be at least 2");
  const double mu = mu_from_beta(beta);
  const double dt = set.step();
  for (int i = 1;; ++i) {
    const double first = set.horizon() - i * dt;
    if (!(first > point)) break;
    try {
      DensitySequence seq = make_density_sequence(set, point, first, mu, depth);
      seq.beta = beta;
      return seq;
    } catch (const ResolutionError&) {
    }
  }
  throw ResolutionError("no l_1 in (l, T) certifies " + std::to_string(depth) +
                        " rings at this time resolution");
}

LocalizedSet localize(const SpaceTimeSet& set, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("localization radius must be positive");
  if (set.count() == 0) throw InvalidArgument("cannot localize an empty set");
  const SpatialGrid& g = set.grid();
  const double dx = g.spacing_x();
  const double dy = g.spacing_y();
  const double dt = set.time_step();
  const int rx = static_cast<int>(std::ceil(radius / dx));
  const int ry = g.dimension == 1 ? 0 : static_cast<int>(std::ceil(radius / dy));
  const int rt = static_cast<int>(std::ceil(radius / dt));

  auto inside_domain = [&](const std::array<double, 2>& p, double t) {
    if (p[0] - radius < 0.0 || p[0] + radius > g.length_x) return false;
    if (g.dimension == 2 && (p[1] - radius < 0.0 || p[1] + radius > g.length_y)) return false;
    return t - radius >= 0.0 && t + radius <= set.horizon();
  };
  auto for_each_in_ball = [&](int k0, int c0, auto&& visit) {
    const int ix0 = c0 % g.cells_x;
    const int iy0 = c0 / g.cells_x;
    const auto p0 = g.center(c0);
    const double t0 = set.time_center(k0);
    for (int k = std::max(0, k0 - rt); k <= std::min(set.time_cells() - 1, k0 + rt); ++k) {
      const double ddt = set.time_center(k) - t0;
      for (int iy = std::max(0, iy0 - ry); iy <= std::min(g.cells_y - 1, iy0 + ry); ++iy) {
        for (int ix = std::max(0, ix0 - rx); ix <= std::min(g.cells_x - 1, ix0 + rx); ++ix) {
          const int c = iy * g.cells_x + ix;
          const auto p = g.center(c);
          const double d2 = (p[0] - p0[0]) * (p[0] - p0[0]) + (p[1] - p0[1]) * (p[1] - p0[1]) +
                            ddt * ddt;
          if (d2 <= radius * radius) visit(k, c);
        }
      }
    }
  };

  // Bound the candidate count; the stride keeps the search deterministic.
  const std::int64_t occupied = set.count();
  const std::int64_t stride = std::max<std::int64_t>(1, occupied / 2048);
  std::int64_t seen = 0;
  double best_density = -1.0;
  int best_k = -1;
  int best_c = -1;
  for (int k = 0; k < set.time_cells(); ++k) {
    for (int c = 0; c < set.space_cells(); ++c) {
      if (!set.at(k, c)) continue;
      if (seen++ % stride != 0) continue;
      if (!inside_domain(g.center(c), set.time_center(k))) continue;
      std::int64_t hit = 0;
      std::int64_t all = 0;
      for_each_in_ball(k, c, [&](int kk, int cc) {
        ++all;
        hit += set.at(kk, cc) ? 1 : 0;
      });
      const double density = static_cast<double>(hit) / static_cast<double>(all);
      if (density > best_density + kSlack) {
        best_density = density;
        best_k = k;
        best_c = c;
      }
    }
  }
  if (best_k < 0 || best_density < 0.5) {
    throw ResolutionError("no space-time ball of radius " + format_double(radius) +
                          " inside the cylinder is half-filled by the set");
  }

  LocalizedSet out;
  out.set = SpaceTimeSet::none(g, set.time_cells(), set.horizon());
  for_each_in_ball(best_k, best_c, [&](int kk, int cc) {
    if (set.at(kk, cc)) out.set.set(kk, cc, true);
  });
  out.center = g.center(best_c);
  out.center_time = set.time_center(best_k);
  out.radius = radius;
  out.density = best_density;
  const double half_diag = 0.5 * std::hypot(dx, dy);
  out.spatial_ball = Ball{out.center, radius + half_diag};
  return out;
}

std::string to_rle(const SpaceTimeSet& set) {
  const SpatialGrid& g = set.grid();
  std::ostringstream out;
  out << "obslab-rle 1 dimension=" << g.dimension << " cells_x=" << g.cells_x
      << " cells_y=" << g.cells_y << " length_x=" << format_double(g.length_x)
      << " length_y=" << format_double(g.length_y) << " time_cells=" << set.time_cells()
      << " horizon=" << format_double(set.horizon()) << "\n";
  const int n = set.space_cells();
  for (int k = 0; k < set.time_cells(); ++k) {
    bool current = set.at(k, 0);
    out << (current ? 1 : 0);
    int run = 0;
    for (int c = 0; c < n; ++c) {
      if (set.at(k, c) == current) {
        ++run;
      } else {
        out << ' ' << run;
        current = !current;
        run = 1;
      }
    }
    out << ' ' << run << "\n";
  }
  return out.str();
}

SpaceTimeSet from_rle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty RLE text");
  std::istringstream header(line);
  std::string magic;
  int version = 0;
  header >> magic >> version;
  if (magic != "obslab-rle" || version != 1) throw InvalidArgument("not an obslab-rle v1 file");
  std::map<std::string, std::string> fields;
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed RLE header token: " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw InvalidArgument("RLE header is missing " + key);
    return it->second;
  };
  SpatialGrid g;
  try {
    g.dimension = std::stoi(need("dimension"));
    g.cells_x = std::stoi(need("cells_x"));
    g.cells_y = std::stoi(need("cells_y"));
    g.length_x = std::stod(need("length_x"));
    g.length_y = std::stod(need("length_y"));
  } catch (const std::logic_error&) {
    throw InvalidArgument("RLE header has a non-numeric grid field");
  }
  const int time_cells = std::stoi(need("time_cells"));
  const double horizon = std::stod(need("horizon"));
  if ((g.dimension != 1 && g.dimension != 2) || g.cells_x < 1 || g.cells_y < 1 ||
      time_cells < 1) {
    throw InvalidArgument("RLE header has invalid grid sizes");
  }
  const int n = g.n_cells();
  std::vector<std::uint8_t> mask;
  mask.reserve(static_cast<std::size_t>(n) * time_cells);
  for (int k = 0; k < time_cells; ++k) {
    if (!std::getline(in, line)) throw InvalidArgument("RLE text ends before the last time row");
    std::istringstream row(line);
    int bit = 0;
    if (!(row >> bit) || (bit != 0 && bit != 1)) {
      throw InvalidArgument("RLE row " + std::to_string(k) + " must start with 0 or 1");
    }
    int filled = 0;
    long run = 0;
    while (row >> run) {
      if (run < 0 || filled + run > n) {
        throw InvalidArgument("RLE row " + std::to_string(k) + " overflows the grid");
      }
      mask.insert(mask.end(), static_cast<std::size_t>(run), static_cast<std::uint8_t>(bit));
      filled += static_cast<int>(run);
      bit ^= 1;
    }
    if (filled != n) throw InvalidArgument("RLE row " + std::to_string(k) + " has wrong length");
  }
  return SpaceTimeSet(g, time_cells, horizon, std::move(mask));
}

}  // namespace obslab
