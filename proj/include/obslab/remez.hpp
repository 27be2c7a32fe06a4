#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace obslab {

// f(theta) = sum_{k=0}^{n} (a_k sin k theta + b_k cos k theta) on (-pi, pi).
class TrigPoly {
 public:
  TrigPoly() = default;
  // sin_coeffs and cos_coeffs both have n + 1 entries.
  TrigPoly(std::vector<double> sin_coeffs, std::vector<double> cos_coeffs);

  static TrigPoly constant(double value);
  static TrigPoly cosine(int k, double amplitude = 1.0);
  static TrigPoly sine(int k, double amplitude = 1.0);

  int degree() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<double>& sin_coeffs() const { return a_; }
  const std::vector<double>& cos_coeffs() const { return b_; }
  bool is_zero() const;

  double operator()(double theta) const;
  TrigPoly scaled(double factor) const;

  // sup |f| over [-pi, pi]: 4096 samples, then golden-section refinement
  // around every sampled local maximum of |f|.
  double sup_norm() const;

 private:
  std::vector<double> a_{0.0};
  std::vector<double> b_{0.0};
};

// Union of uniform cells of (-pi, pi).
class AngleMask {
 public:
  static constexpr int kDefaultCells = 8192;

  AngleMask() = default;
  explicit AngleMask(std::vector<std::uint8_t> cells);

  static AngleMask full(int cells = kDefaultCells);
  // Cells whose midpoint lies in one of the open intervals.
  static AngleMask from_intervals(const std::vector<std::pair<double, double>>& intervals,
                                  int cells = kDefaultCells);

  int size() const { return static_cast<int>(cells_.size()); }
  double step() const;
  double left(int k) const;
  double center(int k) const { return left(k) + 0.5 * step(); }
  bool operator[](int k) const { return cells_[k] != 0; }
  int count() const;
  double measure() const { return count() * step(); }
  bool empty() const { return count() == 0; }

 private:
  std::vector<std::uint8_t> cells_;
};

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  // Natural logs; stay finite when the constant overflows a double.
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool holds = false;

  // lhs / rhs computed in log space (0 when lhs = 0).
  double ratio() const;
};

// ||f||_p <= (64 / sin(|E|/4))^{2(n + 1/p)} ||chi_E f||_p, midpoint quadrature on the
// mask's cells. Requires 1 <= p <= 8.
InequalityCheck remez_check(const TrigPoly& f, const AngleMask& set, double p);

// ||f||_C <= (2 / sin(|E|/4))^{2n} sup_E |f|.
InequalityCheck sup_remez_check(const TrigPoly& f, const AngleMask& set);

// sup over the closure of the mask: cell edges, midpoints and a refinement.
double sup_over(const TrigPoly& f, const AngleMask& set);

struct SublevelCheck {
  double threshold = 0.0;  // (sin(eps/4) / 2)^{2n} ||f||_C
  double sup_norm = 0.0;
  double measure = 0.0;    // |{|f| <= threshold}|
  double tolerance = 0.0;
  bool holds = false;
};

// Measures {theta : |f(theta)| <= threshold} with per-cell root refinement and
// checks it against eps.
SublevelCheck sublevel_measure_check(const TrigPoly& f, double eps,
                                     int cells = AngleMask::kDefaultCells);

// Window [delta, delta + lambda b S] split into uniform cells, F a union of them.
struct SineBoundCase {
  double lambda = 1.0;
  double b = 1.0;
  double horizon = 1.0;  // S
  double delta = 0.0;
  std::vector<std::uint8_t> cells;

  static SineBoundCase from_intervals(double lambda, double b, double horizon, double delta,
                                      const std::vector<std::pair<double, double>>& intervals,
                                      int cells = AngleMask::kDefaultCells);

  double window() const { return lambda * b * horizon; }
  double step() const { return window() / static_cast<double>(cells.size()); }
  double measure() const;
  void validate() const;
};

// 2^{-50} (lambda b S + pi/2)^{-4} |F|^4 <= int chi_F |sin|; the right side is the
// exact integral over each cell.
InequalityCheck sine_integral_bound(const SineBoundCase& c);

// int_u^v |sin x| dx for u <= v.
double integral_abs_sin(double u, double v);

struct SweepSummary {
  int cases = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
  std::uint64_t worst_case = 0;
};

// Random (f, E, p) with n <= 8, E a union of <= 5 intervals of measure >= 0.1,
// p in {1, 2}.
SweepSummary remez_sweep(int cases, std::uint64_t seed);
// Random windows with lambda b S <= 100.
SweepSummary sine_bound_sweep(int cases, std::uint64_t seed);

}  // namespace obslab
