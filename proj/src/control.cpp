#include "obslab/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <ostream>
#include <string>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"
#include "obslab/sphere_min.hpp"

namespace obslab {

namespace {

using Complex = std::complex<double>;

// int_lo^hi e^{-alpha tau} (cos omega tau, sin omega tau) d tau as a complex number.
Complex kernel_integral(double alpha, double omega, double lo, double hi) {
  const Complex beta(-alpha, omega);
  const double h = hi - lo;
  const Complex bh = beta * h;
  // (e^{beta h} - 1) / beta, by series when beta h is small.
  Complex factor;
  if (std::abs(bh) < 1e-4) {
    factor = h * (1.0 + bh / 2.0 + bh * bh / 6.0);
  } else {
    factor = (std::exp(bh) - 1.0) / beta;
  }
  return std::exp(beta * lo) * factor;
}

Pair adjoint_pair(const Pair& v, double eigenvalue, const PhysicalParams& params, double t) {
  const double decay = std::exp(-params.a * eigenvalue * t);
  const double phase = eigenvalue * params.b * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return {decay * (c * v[0] - s * v[1]), decay * (s * v[0] + c * v[1])};
}

void require_region(const SpectralDomain& domain, const SpaceTimeSet& region) {
  if (!(domain.grid() == region.grid())) {
    throw InvalidArgument("control region grid does not match the domain grid");
  }
}

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace

ControlField ControlField::zero(const SpaceTimeSet& region) {
  ControlField f;
  f.region = region;
  f.values.assign(static_cast<std::size_t>(region.time_cells()) * region.space_cells(), 0.0);
  return f;
}

double ControlField::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

bool ControlField::supported_in_region() const {
  for (int k = 0; k < region.time_cells(); ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (at(k, c) != 0.0 && !region.at(k, c)) return false;
    }
  }
  return true;
}

void ControlField::write_csv(std::ostream& out) const {
  const bool two_d = region.grid().dimension == 2;
  out << (two_d ? "x,y,t,value\n" : "x,t,value\n");
  char buf[128];
  for (int k = 0; k < region.time_cells(); ++k) {
    const double t = region.time_center(k);
    for (int c = 0; c < region.space_cells(); ++c) {
      if (!region.at(k, c)) continue;
      const auto p = region.grid().center(c);
      if (two_d) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.12g\n", p[0], p[1], t, at(k, c));
      } else {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g\n", p[0], t, at(k, c));
      }
      out << buf;
    }
  }
}

InputMap::InputMap(const SpectralDomain& domain, const PhysicalParams& params,
                   const SpaceTimeSet& region)
    : region_(region) {
  require_region(domain, region);
  const int n = domain.n_modes();
  const double horizon = region.horizon();
  const double dt = region.time_step();
  const double vol = domain.cell_volume();
  weight_ = vol * dt;
  for (int k = 0; k < region.time_cells(); ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (region.at(k, c)) cells_.emplace_back(k, c);
    }
  }
  matrix_.setZero(2 * n, static_cast<Eigen::Index>(cells_.size()));
  const auto& basis = domain.basis();
  std::vector<Complex> w(region.time_cells());
  for (int j = 0; j < n; ++j) {
    const double alpha = params.a * domain.eigenvalue(j);
    const double omega = params.b * domain.eigenvalue(j);
    for (int k = 0; k < region.time_cells(); ++k) {
      w[k] = kernel_integral(alpha, omega, horizon - (k + 1) * dt, horizon - k * dt);
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      const auto [k, c] = cells_[i];
      const double e = vol * basis(j, c);
      matrix_(2 * j, i) = w[k].real() * e;
      matrix_(2 * j + 1, i) = w[k].imag() * e;
    }
  }
}

double InputMap::dual_norm(const Eigen::VectorXd& z) const {
  return (matrix_.transpose() * z).cwiseAbs().sum();
}

ControlField InputMap::to_field(const Eigen::VectorXd& u) const {
  if (u.size() != control_size()) throw InvalidArgument("control vector has the wrong size");
  ControlField f = ControlField::zero(region_);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto [k, c] = cells_[i];
    f.values[static_cast<std::size_t>(k) * region_.space_cells() + c] = u[i];
  }
  return f;
}

Eigen::VectorXd InputMap::from_field(const ControlField& field) const {
  Eigen::VectorXd u(control_size());
  for (std::size_t i = 0; i < cells_.size(); ++i) u[i] = field.at(cells_[i].first, cells_[i].second);
  return u;
}

SpectralState evolve_adjoint(const SpectralState& v, const SpectralDomain& domain,
                             const PhysicalParams& params, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("evolution time must be nonnegative");
  if (v.size() != domain.n_modes()) {
    throw InvalidArgument("state size does not match the domain truncation");
  }
  SpectralState out(v.size());
  for (int j = 0; j < v.size(); ++j) out[j] = adjoint_pair(v[j], domain.eigenvalue(j), params, t);
  return out;
}

SpectralState simulate_controlled(const SpectralDomain& domain, const PhysicalParams& params,
                                  const SpectralState& v0, const ControlField& control) {
  const SpaceTimeSet& region = control.region;
  require_region(domain, region);
  if (v0.size() != domain.n_modes()) {
    throw InvalidArgument("state size does not match the domain truncation");
  }
  const int n = domain.n_modes();
  const double dt = region.time_step();
  const double vol = domain.cell_volume();
  const auto& basis = domain.basis();
  std::vector<Complex> step_integral(n);
  for (int j = 0; j < n; ++j) {
    step_integral[j] = kernel_integral(params.a * domain.eigenvalue(j),
                                       params.b * domain.eigenvalue(j), 0.0, dt);
  }
  SpectralState v = v0;
  for (int k = 0; k < region.time_cells(); ++k) {
    for (int j = 0; j < n; ++j) {
      double f = 0.0;
      for (int c = 0; c < region.space_cells(); ++c) {
        if (region.at(k, c)) f += control.at(k, c) * basis(j, c);
      }
      f *= vol;
      const Pair moved = adjoint_pair(v[j], domain.eigenvalue(j), params, dt);
      v[j] = {moved[0] + f * step_integral[j].real(), moved[1] + f * step_integral[j].imag()};
    }
  }
  return v;
}

DualityCheck duality_identity_check(const SpectralDomain& domain, const PhysicalParams& params,
                                    const SpectralState& v0, const ControlField& control,
                                    int probes, std::uint64_t seed, double tolerance) {
  if (probes < 0) throw InvalidArgument("probe count must be nonnegative");
  const InputMap map(domain, params, control.region);
  const Eigen::VectorXd u = map.from_field(control);
  const Eigen::VectorXd terminal =
      simulate_controlled(domain, params, v0, control).flatten();
  const Eigen::VectorXd initial = v0.flatten();
  const double horizon = control.region.horizon();
  DualityCheck out;
  out.probes = probes;
  for (int i = 0; i < probes; ++i) {
    Rng rng(case_seed(seed, static_cast<std::uint64_t>(i)));
    const SpectralState z = random_state(rng, domain.n_modes());
    const Eigen::VectorXd zf = z.flatten();
    const double lhs = terminal.dot(zf);
    const double free_term = initial.dot(evolve(z, domain, params, horizon).flatten());
    const double control_term = (map.matrix().transpose() * zf).dot(u);
    const double scale =
        std::max({std::abs(lhs), std::abs(free_term), std::abs(control_term), 1e-300});
    out.max_relative_error =
        std::max(out.max_relative_error, std::abs(lhs - free_term - control_term) / scale);
  }
  out.holds = out.max_relative_error <= tolerance;
  return out;
}

SpaceTimeSet time_reflect(const SpaceTimeSet& set) {
  SpaceTimeSet out = SpaceTimeSet::none(set.grid(), set.time_cells(), set.horizon());
  const int nt = set.time_cells();
  for (int k = 0; k < nt; ++k) {
    for (int c = 0; c < set.space_cells(); ++c) {
      if (set.at(k, c)) out.set(nt - 1 - k, c, true);
    }
  }
  return out;
}

LEstimate estimate_L(const SpectralDomain& domain, const PhysicalParams& params,
                     const SpaceTimeSet& set, int restarts, std::uint64_t seed,
                     const std::vector<SpectralState>& candidates) {
  require_region(domain, set);
  if (set.count() == 0) throw InvalidArgument("observation set has measure zero");
  // Observing e^{At} z on D is the dual trace of the input map on the reflected set.
  const InputMap map(domain, params, time_reflect(set));
  const Eigen::MatrixXd& g = map.matrix();
  const int n = domain.n_modes();
  const int dim = 2 * n;
  const double horizon = set.horizon();

  Eigen::VectorXd decay(dim);
  Eigen::VectorXd scale(dim);
  for (int j = 0; j < n; ++j) {
    decay[2 * j] = decay[2 * j + 1] = std::exp(-params.a * domain.eigenvalue(j) * horizon);
    const double n1 = g.row(2 * j).cwiseAbs().sum();
    const double n2 = g.row(2 * j + 1).cwiseAbs().sum();
    const double s = std::max(n1, n2);
    scale[2 * j] = scale[2 * j + 1] = s > 0.0 ? 1.0 / s : 1.0;
  }
  const Eigen::VectorXd decay2 = decay.cwiseProduct(decay);

  // The ratio is homogeneous, so minimizing over the sphere in p with z = scale * p
  // covers every ray.
  const SphereObjective objective = [&](const Eigen::VectorXd& p, Eigen::VectorXd* grad) {
    const Eigen::VectorXd z = scale.cwiseProduct(p);
    const Eigen::VectorXd trace = g.transpose() * z;
    const double num = trace.cwiseAbs().sum();
    const double den = std::sqrt(decay2.dot(z.cwiseProduct(z)));
    if (grad) {
      Eigen::VectorXd signs(trace.size());
      for (Eigen::Index i = 0; i < trace.size(); ++i) signs[i] = sign_of(trace[i]);
      const Eigen::VectorXd dz =
          (g * signs) / den - num * decay2.cwiseProduct(z) / (den * den * den);
      *grad = scale.cwiseProduct(dz);
    }
    return num / den;
  };

  std::vector<Eigen::VectorXd> warm;
  for (const SpectralState& c : candidates) {
    if (c.size() != n || c.is_zero()) continue;
    warm.push_back(c.flatten().cwiseQuotient(scale));
  }
  for (int i = 0; i < std::min(dim, 4); ++i) warm.push_back(Eigen::VectorXd::Unit(dim, i));

  SphereMinOptions options;
  options.restarts = restarts;
  options.seed = seed;
  const SphereMinResult r = minimize_on_sphere(objective, dim, options, warm);
  if (!(r.value > 0.0)) throw PropertyViolation("estimated observability constant is not positive");
  LEstimate out;
  out.value = r.value;
  const Eigen::VectorXd z = scale.cwiseProduct(r.argmin);
  out.argmin = SpectralState::unflatten(z / z.norm());
  return out;
}

NullControlResult synthesize_null_control(const NullControlProblem& problem, double tol,
                                          const NullControlOptions& options) {
  if (!(tol > 1e-6 && tol < 1e-1)) throw InvalidArgument("tol must lie in (1e-6, 1e-1)");
  const SpectralDomain& domain = problem.domain;
  require_region(domain, problem.region);
  if (problem.v0.size() != domain.n_modes()) {
    throw InvalidArgument("initial state size does not match the domain truncation");
  }
  if (problem.region.count() == 0) throw InvalidArgument("control region has measure zero");
  if (options.iterations < 1) throw InvalidArgument("iteration budget must be positive");

  NullControlResult result;
  result.control = ControlField::zero(problem.region);
  DualityCertificate& cert = result.certificate;
  cert.initial_norm = problem.v0.norm();
  cert.dual_state = SpectralState(domain.n_modes());
  if (problem.v0.is_zero()) return result;

  const double horizon = problem.region.horizon();
  const InputMap map(domain, problem.params, problem.region);
  const Eigen::MatrixXd& gmat = map.matrix();
  const Eigen::VectorXd g = evolve_adjoint(problem.v0, domain, problem.params, horizon).flatten();

  auto dual_norm = [&](const Eigen::VectorXd& z) { return map.dual_norm(z); };
  auto objective = [&](const Eigen::VectorXd& z) {
    const double nz = dual_norm(z);
    return 0.5 * nz * nz + g.dot(z);
  };
  auto subgradient = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd trace = gmat.transpose() * z;
    Eigen::VectorXd signs(trace.size());
    double nz = 0.0;
    for (Eigen::Index i = 0; i < trace.size(); ++i) {
      signs[i] = sign_of(trace[i]);
      nz += std::abs(trace[i]);
    }
    return Eigen::VectorXd(nz * (gmat * signs) + g);
  };

  // Iterate in p with z = diag(pre) p, each mode pair scaled by its input-map row sum.
  const int n_modes = domain.n_modes();
  Eigen::VectorXd pre(2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double s =
        std::max(gmat.row(2 * j).cwiseAbs().sum(), gmat.row(2 * j + 1).cwiseAbs().sum());
    pre[2 * j] = pre[2 * j + 1] = s > 0.0 ? 1.0 / s : 1.0;
  }

  // Line probe along -pre * g fixes the step scale.
  const Eigen::VectorXd pg = pre.cwiseProduct(g);
  const Eigen::VectorXd direction = pg.normalized();
  const double n_dir = dual_norm(pre.cwiseProduct(direction));
  if (!(n_dir > 0.0)) throw NumericalError("the control region does not see the initial state");
  const double scale = pg.norm() / (n_dir * n_dir);
  Eigen::VectorXd p = -scale * direction;
  Eigen::VectorXd best = pre.cwiseProduct(p);
  double best_value = objective(best);
  Eigen::VectorXd average = Eigen::VectorXd::Zero(p.size());
  int averaged = 0;
  const int total = options.iterations;
  for (int k = 1; k <= total; ++k) {
    const Eigen::VectorXd s = pre.cwiseProduct(subgradient(pre.cwiseProduct(p)));
    const double sn = s.norm();
    if (!(sn > 0.0)) break;
    p -= (scale / std::sqrt(static_cast<double>(k))) * s / sn;
    const Eigen::VectorXd z = pre.cwiseProduct(p);
    const double value = objective(z);
    if (value < best_value) {
      best_value = value;
      best = z;
    }
    if (k > total / 2) {
      average += z;
      ++averaged;
    }
  }
  cert.iterations = total;
  if (averaged > 0) {
    average /= averaged;
    if (objective(average) < best_value) best = average;
  }

  // Optimal scaling along the ray of z-bar: N(t z) = c / N(z) = M.
  const double c_val = -g.dot(best);
  const double n_best = dual_norm(best);
  if (!(c_val > 0.0) || !(n_best > 0.0)) {
    throw NumericalError("dual iteration did not produce a descent ray");
  }
  const double magnitude = c_val / n_best;
  const Eigen::VectorXd zbar = (c_val / (n_best * n_best)) * best;
  cert.dual_state = SpectralState::unflatten(zbar);
  cert.dual_value = objective(zbar);
  cert.magnitude = magnitude;

  const LEstimate l = estimate_L(domain, problem.params, time_reflect(problem.region),
                                 options.restarts, options.seed, {cert.dual_state});
  cert.l_hat = l.value;
  cert.control_bound = cert.initial_norm / l.value;

  const Eigen::VectorXd trace = gmat.transpose() * zbar;
  Eigen::VectorXd u(trace.size());
  for (Eigen::Index i = 0; i < trace.size(); ++i) u[i] = magnitude * sign_of(trace[i]);

  // Residual correction on the cells where the dual trace is closest to zero,
  // kept inside the certified box.
  const double box = cert.control_bound;
  std::vector<int> order(trace.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(trace[a]) < std::abs(trace[b]); });
  const double target = 0.1 * tol * cert.initial_norm;
  Eigen::VectorXd residual = g + gmat * u;
  for (int round = 0; round < 8 && residual.norm() > target; ++round) {
    const int free = std::min<int>(static_cast<int>(trace.size()), (4 << round) * gmat.rows());
    Eigen::MatrixXd sub(gmat.rows(), free);
    for (int i = 0; i < free; ++i) sub.col(i) = gmat.col(order[i]);
    const Eigen::VectorXd delta = sub.completeOrthogonalDecomposition().solve(-residual);
    for (int i = 0; i < free; ++i) {
      u[order[i]] = std::clamp(u[order[i]] + delta[i], -box, box);
    }
    residual = g + gmat * u;
  }

  // Accelerated projected gradient on the row-scaled residual inside the box.
  if (residual.norm() > target) {
    const Eigen::MatrixXd sg = pre.asDiagonal() * gmat;
    const Eigen::VectorXd sb = pre.cwiseProduct(g);
    const Eigen::MatrixXd gram = sg * sg.transpose();
    const double lipschitz =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();
    Eigen::VectorXd x = u;
    Eigen::VectorXd y = u;
    double momentum = 1.0;
    for (int k = 0; k < options.iterations && residual.norm() > target; ++k) {
      const Eigen::VectorXd grad = sg.transpose() * (sg * y + sb);
      Eigen::VectorXd next = (y - grad / lipschitz).cwiseMax(-box).cwiseMin(box);
      const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + ((momentum - 1.0) / m_next) * (next - x);
      x = std::move(next);
      momentum = m_next;
      residual = g + gmat * x;
    }
    u = x;
  }

  result.control = map.to_field(u);
  cert.control_sup = result.control.sup_norm();
  cert.terminal_norm =
      simulate_controlled(domain, problem.params, problem.v0, result.control).norm();
  if (cert.control_sup > cert.control_bound * (1.0 + 1e-6)) {
    throw PropertyViolation("control exceeds the certified bound ||v0|| / L");
  }
  if (cert.terminal_norm > tol * cert.initial_norm) {
    throw ConvergenceError("null control reached ||v(T)|| = " + std::to_string(cert.terminal_norm) +
                           " above tol * ||v0|| = " + std::to_string(tol * cert.initial_norm));
  }
  return result;
}

void TimeOptimalProblem::validate() const {
  if (!(nu1 < nu2)) throw InvalidArgument("control bounds need nu1 < nu2");
  if (!(target_radius >= 0.0)) throw InvalidArgument("target radius must be nonnegative");
  if (v0.size() != domain.n_modes()) {
    throw InvalidArgument("initial state size does not match the domain truncation");
  }
  if (!(v0.norm() > target_radius)) {
    throw InvalidArgument("initial state must lie outside the target ball");
  }
  if (!(omega.grid() == domain.grid())) {
    throw InvalidArgument("control region grid does not match the domain grid");
  }
  if (omega.empty()) throw InvalidArgument("control region must have positive measure");
  if (time_cells < 1) throw InvalidArgument("time cell count must be positive");
}

FeasibilityResult time_optimal_feasibility(const TimeOptimalProblem& problem, double horizon,
                                           int iterations, const Eigen::VectorXd* warm) {
  problem.validate();
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  SpaceTimeSet region = SpaceTimeSet::none(problem.domain.grid(), problem.time_cells, horizon);
  for (int k = 0; k < problem.time_cells; ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (problem.omega[c]) region.set(k, c, true);
    }
  }
  const InputMap map(problem.domain, problem.params, region);
  const Eigen::MatrixXd& gmat = map.matrix();
  const Eigen::VectorXd g =
      evolve_adjoint(problem.v0, problem.domain, problem.params, horizon).flatten();

  const Eigen::MatrixXd gram = gmat * gmat.transpose();
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();
  if (!(lipschitz > 0.0)) throw NumericalError("input map vanishes");
  const double step = 1.0 / lipschitz;
  auto project = [&](Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], problem.nu1, problem.nu2);
    return v;
  };

  Eigen::VectorXd u = warm && warm->size() == map.control_size()
                          ? project(*warm)
                          : project(Eigen::VectorXd::Zero(map.control_size()));
  Eigen::VectorXd y = u;
  double t = 1.0;
  Eigen::VectorXd best = u;
  double best_distance = (g + gmat * u).norm();
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = gmat.transpose() * (g + gmat * y);
    const Eigen::VectorXd next = project(y - step * grad);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - u);
    u = next;
    t = t_next;
    const double d = (g + gmat * u).norm();
    if (d < best_distance) {
      best_distance = d;
      best = u;
    }
  }
  FeasibilityResult out;
  out.probe.horizon = horizon;
  out.probe.distance = best_distance;
  out.probe.feasible = best_distance <= problem.target_radius;
  out.control = map.to_field(best);
  return out;
}

TimeOptimalResult solve_time_optimal(const TimeOptimalProblem& problem, double t_max,
                                     double tol_t, int iterations) {
  problem.validate();
  if (!(problem.target_radius > 0.0)) throw InvalidArgument("target radius must be positive");
  if (!(t_max > 0.0)) throw InvalidArgument("T_max must be positive");
  if (!(tol_t > 0.0)) tol_t = 1e-3 * t_max;

  TimeOptimalResult result;
  FeasibilityResult best = time_optimal_feasibility(problem, t_max, iterations);
  result.trace.push_back(best.probe);
  if (!best.probe.feasible) {
    throw InfeasibleError("target ball is not reachable by T_max = " + std::to_string(t_max) +
                          " (distance " + std::to_string(best.probe.distance) + ")");
  }
  double lo = 0.0;
  double hi = t_max;
  // Region cells share one ordering for every horizon, so solutions warm-start each other.
  auto control_vector = [](const ControlField& f) {
    std::vector<double> vals;
    for (int k = 0; k < f.region.time_cells(); ++k) {
      for (int c = 0; c < f.region.space_cells(); ++c) {
        if (f.region.at(k, c)) vals.push_back(f.at(k, c));
      }
    }
    return Eigen::VectorXd(
        Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
  };
  Eigen::VectorXd warm = control_vector(best.control);
  while (hi - lo > tol_t) {
    const double mid = 0.5 * (lo + hi);
    FeasibilityResult r = time_optimal_feasibility(problem, mid, iterations, &warm);
    result.trace.push_back(r.probe);
    if (r.probe.feasible) {
      hi = mid;
      best = std::move(r);
      warm = control_vector(best.control);
    } else {
      lo = mid;
    }
  }

  if (problem.nu1 <= 0.0 && problem.nu2 >= 0.0) {
    // With u = 0 admissible, reaching the ball at T keeps it reachable later.
    for (int i = 1; i <= 3; ++i) {
      const double later = hi + (t_max - hi) * i / 4.0;
      if (!(later > hi)) break;
      const FeasibilityResult r = time_optimal_feasibility(problem, later, iterations, &warm);
      result.trace.push_back(r.probe);
      if (!r.probe.feasible) {
        throw PropertyViolation("feasibility is not monotone: T = " + std::to_string(later) +
                                " infeasible after T = " + std::to_string(hi));
      }
    }
  }
  result.t_star = hi;
  result.distance = best.probe.distance;
  result.control = std::move(best.control);
  return result;
}

BangBangCheck verify_bang_bang(const ControlField& control, double nu1, double nu2, double eps) {
  if (!(nu1 < nu2)) throw InvalidArgument("control bounds need nu1 < nu2");
  if (!(eps > 0.0)) eps = 0.05 * (nu2 - nu1);
  std::int64_t cells = 0;
  std::int64_t interior = 0;
  for (int k = 0; k < control.region.time_cells(); ++k) {
    for (int c = 0; c < control.region.space_cells(); ++c) {
      if (!control.region.at(k, c)) continue;
      ++cells;
      const double v = control.at(k, c);
      if (v > nu1 + eps && v < nu2 - eps) ++interior;
    }
  }
  BangBangCheck out;
  out.violation_fraction = cells > 0 ? static_cast<double>(interior) / cells : 0.0;
  out.holds = out.violation_fraction <= 0.05;
  return out;
}

}  // namespace obslab
