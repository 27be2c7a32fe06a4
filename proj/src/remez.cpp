#include "obslab/remez.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"

namespace obslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSupSamples = 4096;

// Maximizes |f| on [lo, hi] by golden-section search.
double golden_max_abs(const TrigPoly& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = std::abs(f(x1));
  double f2 = std::abs(f(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(f(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(f(x1));
    }
  }
  return std::max({f1, f2, std::abs(f(lo)), std::abs(f(hi))});
}

// Values of f at the midpoints of `cells` uniform cells of (-pi, pi).
std::vector<double> sample_centers(const TrigPoly& f, int cells) {
  std::vector<double> out(cells);
  const double h = 2.0 * kPi / cells;
  for (int k = 0; k < cells; ++k) out[k] = f(-kPi + (k + 0.5) * h);
  return out;
}

double root_in(const TrigPoly& f, double threshold, double lo, double hi) {
  // g(x) = |f(x)| - threshold changes sign on [lo, hi].
  const bool lo_below = std::abs(f(lo)) <= threshold;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((std::abs(f(mid)) <= threshold) == lo_below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Measure of {|f| <= threshold} on [lo, hi], assuming at most one crossing.
double below_on(const TrigPoly& f, double threshold, double lo, double hi, double flo,
                double fhi) {
  const bool a = std::abs(flo) <= threshold;
  const bool b = std::abs(fhi) <= threshold;
  if (a && b) return hi - lo;
  if (!a && !b) return 0.0;
  const double r = root_in(f, threshold, lo, hi);
  return a ? r - lo : hi - r;
}

}  // namespace

TrigPoly::TrigPoly(std::vector<double> sin_coeffs, std::vector<double> cos_coeffs)
    : a_(std::move(sin_coeffs)), b_(std::move(cos_coeffs)) {
  if (a_.empty() || a_.size() != b_.size()) {
    throw InvalidArgument("trigonometric polynomial needs n + 1 sine and cosine coefficients");
  }
  for (std::size_t k = 0; k < a_.size(); ++k) {
    if (!std::isfinite(a_[k]) || !std::isfinite(b_[k])) {
      throw InvalidArgument("trigonometric coefficients must be finite");
    }
  }
}

TrigPoly TrigPoly::constant(double value) { return TrigPoly({0.0}, {value}); }

TrigPoly TrigPoly::cosine(int k, double amplitude) {
  if (k < 0) throw InvalidArgument("frequency must be nonnegative");
  std::vector<double> a(k + 1, 0.0);
  std::vector<double> b(k + 1, 0.0);
  b[k] = amplitude;
  return TrigPoly(std::move(a), std::move(b));
}

TrigPoly TrigPoly::sine(int k, double amplitude) {
  if (k < 0) throw InvalidArgument("frequency must be nonnegative");
  std::vector<double> a(k + 1, 0.0);
  std::vector<double> b(k + 1, 0.0);
  a[k] = amplitude;
  return TrigPoly(std::move(a), std::move(b));
}

bool TrigPoly::is_zero() const {
  for (std::size_t k = 0; k < a_.size(); ++k) {
    // sin(0 theta) vanishes, so a_0 never contributes.
    if ((k > 0 && a_[k] != 0.0) || b_[k] != 0.0) return false;
  }
  return true;
}

double TrigPoly::operator()(double theta) const {
  const double s1 = std::sin(theta);
  const double c1 = std::cos(theta);
  double sk = 0.0;
  double ck = 1.0;
  double value = b_[0];
  for (std::size_t k = 1; k < a_.size(); ++k) {
    const double s = sk * c1 + ck * s1;
    const double c = ck * c1 - sk * s1;
    sk = s;
    ck = c;
    value += a_[k] * sk + b_[k] * ck;
  }
  return value;
}

TrigPoly TrigPoly::scaled(double factor) const {
  TrigPoly out = *this;
  for (auto& v : out.a_) v *= factor;
  for (auto& v : out.b_) v *= factor;
  return out;
}

double TrigPoly::sup_norm() const {
  const std::vector<double> v = sample_centers(*this, kSupSamples);
  const double h = 2.0 * kPi / kSupSamples;
  double best = 0.0;
  for (int k = 0; k < kSupSamples; ++k) {
    const double here = std::abs(v[k]);
    best = std::max(best, here);
    const double prev = std::abs(v[(k + kSupSamples - 1) % kSupSamples]);
    const double next = std::abs(v[(k + 1) % kSupSamples]);
    if (here >= prev && here >= next) {
      const double x = -kPi + (k + 0.5) * h;
      best = std::max(best, golden_max_abs(*this, x - h, x + h));
    }
  }
  return best;
}

AngleMask::AngleMask(std::vector<std::uint8_t> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw InvalidArgument("angle mask needs at least one cell");
  for (auto& c : cells_) c = c ? 1 : 0;
}

AngleMask AngleMask::full(int cells) {
  if (cells < 1) throw InvalidArgument("angle mask needs at least one cell");
  return AngleMask(std::vector<std::uint8_t>(cells, 1));
}

AngleMask AngleMask::from_intervals(const std::vector<std::pair<double, double>>& intervals,
                                    int cells) {
  if (cells < 1) throw InvalidArgument("angle mask needs at least one cell");
  std::vector<std::uint8_t> mask(cells, 0);
  const double h = 2.0 * kPi / cells;
  for (int k = 0; k < cells; ++k) {
    const double t = -kPi + (k + 0.5) * h;
    for (const auto& [lo, hi] : intervals) {
      if (t > lo && t < hi) {
        mask[k] = 1;
        break;
      }
    }
  }
  return AngleMask(std::move(mask));
}

double AngleMask::step() const { return 2.0 * kPi / size(); }

double AngleMask::left(int k) const { return -kPi + k * step(); }

int AngleMask::count() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double InequalityCheck::ratio() const {
  if (lhs == 0.0) return 0.0;
  return std::exp(log_lhs - log_rhs);
}

InequalityCheck remez_check(const TrigPoly& f, const AngleMask& set, double p) {
  if (!(p >= 1.0 && p <= 8.0)) throw InvalidArgument("remez_check supports p in [1, 8]");
  if (set.empty()) throw InvalidArgument("remez_check needs a set of positive measure");
  const std::vector<double> v = sample_centers(f, set.size());
  double full = 0.0;
  double restricted = 0.0;
  for (int k = 0; k < set.size(); ++k) {
    const double a = std::abs(v[k]);
    const double w = p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p);
    full += w;
    if (set[k]) restricted += w;
  }
  const double h = set.step();
  InequalityCheck out;
  out.lhs = std::pow(full * h, 1.0 / p);
  const double observed = std::pow(restricted * h, 1.0 / p);
  const double exponent = 2.0 * (f.degree() + 1.0 / p);
  out.log_lhs = std::log(out.lhs);
  out.log_rhs = exponent * (std::log(64.0) - std::log(std::sin(set.measure() / 4.0))) +
                std::log(observed);
  out.rhs = std::exp(out.log_rhs);
  out.holds = out.lhs == 0.0 || out.log_lhs <= out.log_rhs + std::log1p(1e-9);
  return out;
}

double sup_over(const TrigPoly& f, const AngleMask& set) {
  if (set.empty()) throw InvalidArgument("sup over an empty set");
  const double h = set.step();
  double best = -1.0;
  int best_cell = 0;
  for (int k = 0; k < set.size(); ++k) {
    if (!set[k]) continue;
    const double x = set.left(k);
    const double m = std::max({std::abs(f(x)), std::abs(f(x + 0.5 * h)), std::abs(f(x + h))});
    if (m > best) {
      best = m;
      best_cell = k;
    }
  }
  for (int k = std::max(0, best_cell - 1); k <= std::min(set.size() - 1, best_cell + 1); ++k) {
    if (set[k]) best = std::max(best, golden_max_abs(f, set.left(k), set.left(k) + h));
  }
  return best;
}

InequalityCheck sup_remez_check(const TrigPoly& f, const AngleMask& set) {
  if (set.empty()) throw InvalidArgument("sup_remez_check needs a set of positive measure");
  InequalityCheck out;
  out.lhs = f.sup_norm();
  const double observed = sup_over(f, set);
  out.log_lhs = std::log(out.lhs);
  out.log_rhs = 2.0 * f.degree() * (std::log(2.0) - std::log(std::sin(set.measure() / 4.0))) +
                std::log(observed);
  out.rhs = std::exp(out.log_rhs);
  out.holds = out.lhs == 0.0 || out.log_lhs <= out.log_rhs + std::log1p(1e-9);
  return out;
}

SublevelCheck sublevel_measure_check(const TrigPoly& f, double eps, int cells) {
  if (f.is_zero()) throw InvalidArgument("sub-level estimate needs a nonzero polynomial");
  if (f.degree() < 1) {
    throw InvalidArgument("sub-level estimate needs degree n >= 1 (a constant is an element of T_1)");
  }
  if (!(eps > 0.0 && eps < 2.0 * kPi)) throw InvalidArgument("eps must lie in (0, 2 pi)");
  if (cells < 1) throw InvalidArgument("cell count must be positive");
  SublevelCheck out;
  out.sup_norm = f.sup_norm();
  out.threshold = std::pow(0.5 * std::sin(eps / 4.0), 2.0 * f.degree()) * out.sup_norm;
  const double h = 2.0 * kPi / cells;
  double measure = 0.0;
  double left_value = f(-kPi);
  for (int k = 0; k < cells; ++k) {
    const double lo = -kPi + k * h;
    const double mid = lo + 0.5 * h;
    const double hi = lo + h;
    const double mid_value = f(mid);
    const double right_value = f(hi);
    measure += below_on(f, out.threshold, lo, mid, left_value, mid_value);
    measure += below_on(f, out.threshold, mid, hi, mid_value, right_value);
    left_value = right_value;
  }
  out.measure = measure;
  // Dips narrower than half a cell can be missed; |f| has at most 2n of them.
  out.tolerance = 2.0 * f.degree() * h + 1e-12;
  out.holds = out.measure <= eps + out.tolerance;
  return out;
}

SineBoundCase SineBoundCase::from_intervals(
    double lambda, double b, double horizon, double delta,
    const std::vector<std::pair<double, double>>& intervals, int cells) {
  if (cells < 1) throw InvalidArgument("cell count must be positive");
  SineBoundCase c;
  c.lambda = lambda;
  c.b = b;
  c.horizon = horizon;
  c.delta = delta;
  c.cells.assign(cells, 0);
  const double h = c.window() / cells;
  for (int k = 0; k < cells; ++k) {
    const double t = delta + (k + 0.5) * h;
    for (const auto& [lo, hi] : intervals) {
      if (t > lo && t < hi) {
        c.cells[k] = 1;
        break;
      }
    }
  }
  return c;
}

double SineBoundCase::measure() const {
  return std::count(cells.begin(), cells.end(), std::uint8_t{1}) * step();
}

void SineBoundCase::validate() const {
  if (!(lambda > 0.0) || !(b > 0.0) || !(horizon > 0.0)) {
    throw InvalidArgument("sine bound needs lambda, b and S positive");
  }
  if (!(delta >= -kPi / 2.0 && delta <= kPi / 2.0)) {
    throw InvalidArgument("phase delta must lie in [-pi/2, pi/2]");
  }
  if (cells.empty()) throw InvalidArgument("sine bound window needs at least one cell");
}

double integral_abs_sin(double u, double v) {
  if (v < u) throw InvalidArgument("integral_abs_sin needs u <= v");
  double total = 0.0;
  double lo = u;
  while (lo < v) {
    // Next multiple of pi strictly above lo.
    const double next_zero = (std::floor(lo / kPi) + 1.0) * kPi;
    const double hi = std::min(v, next_zero);
    // |cos lo - cos hi| without cancellation.
    total += 2.0 * std::abs(std::sin(0.5 * (lo + hi)) * std::sin(0.5 * (hi - lo)));
    if (hi <= lo) break;
    lo = hi;
  }
  return total;
}

InequalityCheck sine_integral_bound(const SineBoundCase& c) {
  c.validate();
  const double f_measure = c.measure();
  if (!(f_measure > 0.0)) throw InvalidArgument("sine bound needs a set F of positive measure");
  const double h = c.step();
  double integral = 0.0;
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    if (!c.cells[k]) continue;
    const double lo = c.delta + k * h;
    integral += integral_abs_sin(lo, lo + h);
  }
  InequalityCheck out;
  out.log_lhs = -50.0 * std::log(2.0) - 4.0 * std::log(c.window() + kPi / 2.0) +
                4.0 * std::log(f_measure);
  out.lhs = std::exp(out.log_lhs);
  out.rhs = integral;
  out.log_rhs = std::log(integral);
  out.holds = out.lhs <= out.rhs;
  return out;
}

SweepSummary remez_sweep(int cases, std::uint64_t seed) {
  if (cases < 0) throw InvalidArgument("sweep size must be nonnegative");
  SweepSummary s;
  for (int i = 0; i < cases; ++i) {
    Rng rng(case_seed(seed, static_cast<std::uint64_t>(i)));
    const TrigPoly f = random_trig_poly(rng, 8);
    const AngleMask e = random_angle_set(rng, AngleMask::kDefaultCells, 5, 0.1);
    const double p = std::uniform_int_distribution<int>(1, 2)(rng);
    const InequalityCheck c = remez_check(f, e, p);
    ++s.cases;
    if (!c.holds) ++s.violations;
    if (c.ratio() > s.worst_ratio) {
      s.worst_ratio = c.ratio();
      s.worst_case = static_cast<std::uint64_t>(i);
    }
  }
  return s;
}

SweepSummary sine_bound_sweep(int cases, std::uint64_t seed) {
  if (cases < 0) throw InvalidArgument("sweep size must be nonnegative");
  SweepSummary s;
  for (int i = 0; i < cases; ++i) {
    Rng rng(case_seed(seed, static_cast<std::uint64_t>(i)));
    const SineBoundCase c = random_sine_case(rng, 100.0);
    const InequalityCheck r = sine_integral_bound(c);
    ++s.cases;
    if (!r.holds) ++s.violations;
    const double ratio = std::exp(r.log_lhs - r.log_rhs);
    if (ratio > s.worst_ratio) {
      s.worst_ratio = ratio;
      s.worst_case = static_cast<std::uint64_t>(i);
    }
  }
  return s;
}

}  // namespace obslab
