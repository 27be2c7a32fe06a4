#include "obslab/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "obslab/errors.hpp"
#include "obslab/sphere_min.hpp"

namespace obslab {

namespace {

void require_same_grid(const SpectralDomain& domain, const SpaceTimeSet& set) {
  if (!(domain.grid() == set.grid())) {
    throw InvalidArgument("space-time set grid does not match the domain grid");
  }
}

void require_same_times(const SpaceTimeSet& set, const TimeMask& times) {
  if (times.size() != set.time_cells() ||
      std::abs(times.horizon() - set.horizon()) > 1e-12 * set.horizon()) {
    throw InvalidArgument("time set grid does not match the space-time set");
  }
}

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

// Log-space bisection for u = log x in u + s e^u = log(target).
double solve_log_linear(double target, double s) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw InvalidArgument("target must be positive and finite");
  }
  if (!(s >= 0.0)) throw InvalidArgument("exponent rate must be nonnegative");
  const double log_target = std::log(target);
  auto h = [&](double u) { return u + s * std::exp(u) - log_target; };
  double hi = log_target;  // h(hi) = s * target >= 0
  double lo = hi - 1.0;
  while (h(lo) > 0.0) lo -= 2.0 * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

double grid_mode_l1(const SpectralDomain& domain, int mode) {
  return domain.basis().row(mode).cwiseAbs().sum() * domain.cell_volume();
}

}  // namespace

std::vector<double> observation_profile(const SpectralDomain& domain, const PhysicalParams& params,
                                        const ObservationSelector& selector,
                                        const SpectralState& z, const SpaceTimeSet& set,
                                        const std::vector<int>& time_cells) {
  require_same_grid(domain, set);
  if (z.size() != domain.n_modes()) {
    throw InvalidArgument("state size does not match the domain truncation");
  }
  const int n = domain.n_modes();
  const int count = static_cast<int>(time_cells.size());
  std::vector<double> out(count, 0.0);
  if (count == 0) return out;
  const bool full = selector.kind() == SelectorKind::Full;
  Eigen::MatrixXd c1(n, count);
  Eigen::MatrixXd c2(full ? n : 0, count);
  for (int k = 0; k < count; ++k) {
    const double t = set.time_center(time_cells[k]);
    for (int j = 0; j < n; ++j) {
      const Pair p = evolve_pair(z[j], domain.eigenvalue(j), params, t);
      if (full) {
        c1(j, k) = p[0];
        c2(j, k) = p[1];
      } else {
        c1(j, k) = selector.mu1() * p[0] + selector.mu2() * p[1];
      }
    }
  }
  const Eigen::MatrixXd f1 = domain.basis().transpose() * c1;
  Eigen::MatrixXd f2;
  if (full) f2 = domain.basis().transpose() * c2;
  const int cells = set.space_cells();
  for (int k = 0; k < count; ++k) {
    const int row = time_cells[k];
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
      if (!set.at(row, c)) continue;
      total += full ? std::hypot(f1(c, k), f2(c, k)) : std::abs(f1(c, k));
    }
    out[k] = total * domain.cell_volume();
  }
  return out;
}

double integrated_observation(const SpectralDomain& domain, const PhysicalParams& params,
                              const ObservationSelector& selector, const SpectralState& z,
                              const SpaceTimeSet& set, const TimeMask& times, double lo,
                              double hi) {
  require_same_times(set, times);
  const double dt = set.time_step();
  std::vector<int> cells;
  std::vector<double> weights;
  for (int k = 0; k < set.time_cells(); ++k) {
    if (!times[k]) continue;
    const double w = overlap(k * dt, (k + 1) * dt, lo, hi);
    if (w > 0.0) {
      cells.push_back(k);
      weights.push_back(w);
    }
  }
  const std::vector<double> o = observation_profile(domain, params, selector, z, set, cells);
  double total = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) total += weights[i] * o[i];
  return total;
}

double masked_l1(const SpectralDomain& domain, const SpatialMask& omega, const Eigen::VectorXd& a) {
  const auto& basis = domain.basis();
  const int k = static_cast<int>(a.size());
  double total = 0.0;
  for (int c = 0; c < omega.size(); ++c) {
    if (omega[c]) total += std::abs(basis.col(c).head(k).dot(a));
  }
  return total * domain.cell_volume();
}

double solve_c_exp(double rhs, double s) { return solve_log_linear(rhs, s); }

double solve_m_exp(double target, double q) { return solve_log_linear(target, q); }

SpectralL1Constant estimate_spectral_L1_constant(const SpectralDomain& domain, double lambda,
                                                 const SpatialMask& omega, int restarts,
                                                 std::uint64_t seed,
                                                 const std::vector<Eigen::VectorXd>& warm) {
  if (!(omega.grid() == domain.grid())) {
    throw InvalidArgument("mask grid does not match the domain grid");
  }
  if (omega.empty()) throw InvalidArgument("observation region must have positive measure");
  const int k = count_below(domain, lambda);

  std::vector<int> cells;
  for (int c = 0; c < omega.size(); ++c) {
    if (omega[c]) cells.push_back(c);
  }
  Eigen::MatrixXd local(k, cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    local.col(i) = domain.basis().col(cells[i]).head(k);
  }
  const double vol = domain.cell_volume();
  const SphereObjective objective = [&](const Eigen::VectorXd& a, Eigen::VectorXd* grad) {
    const Eigen::VectorXd values = local.transpose() * a;
    if (grad) {
      Eigen::VectorXd signs(values.size());
      for (Eigen::Index i = 0; i < values.size(); ++i) signs[i] = values[i] >= 0.0 ? 1.0 : -1.0;
      *grad = vol * (local * signs);
    }
    return vol * values.cwiseAbs().sum();
  };

  std::vector<Eigen::VectorXd> starts;
  for (const auto& w : warm) {
    // Shorter warm starts are padded with zeros: a lower-frequency minimizer.
    if (w.size() > k) continue;
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(k);
    padded.head(w.size()) = w;
    starts.push_back(padded);
  }
  SphereMinOptions options;
  options.restarts = restarts;
  options.seed = seed;
  const SphereMinResult r = minimize_on_sphere(objective, k, options, starts);
  if (!(r.value > 0.0) || !std::isfinite(r.value)) {
    throw NumericalError("spectral L1 minimization returned a non-positive value");
  }

  SpectralL1Constant out;
  out.lambda = lambda;
  out.modes = k;
  out.min_l1 = r.value;
  out.constant = solve_c_exp(1.0 / (r.value * r.value), std::sqrt(lambda));
  out.minimizer = r.argmin;
  return out;
}

EquivalenceResult interp_equivalence(double pi1, double theta, const FunctionalTriple& triple) {
  if (!(pi1 >= 1.0)) throw InvalidArgument("pi1 must be at least 1");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  const std::size_t n = triple.f1.size();
  if (triple.f2.size() != n || triple.f3.size() != n) {
    throw InvalidArgument("functional triple has mismatched probe counts");
  }
  const double gamma = theta / (1.0 - theta);
  EquivalenceResult out;
  out.pi2 = 2.0 * pi1;
  out.eps_form_holds = true;
  out.product_form_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double f1 = triple.f1[i];
    const double f2 = triple.f2[i];
    const double f3 = triple.f3[i];
    if (!(f1 >= 0.0 && f2 >= 0.0 && f3 >= 0.0)) {
      throw InvalidArgument("functionals must be nonnegative");
    }
    if (f1 > f3) {
      throw InvalidArgument("probe " + std::to_string(i) + " violates F1 <= F3");
    }
    auto eps_rhs = [&](double eps) { return pi1 * (std::pow(eps, -gamma) * f2 + eps * f3); };
    // Infimum over eps in (0, 1) of the epsilon form's right side.
    double inf_rhs;
    if (f2 == 0.0) {
      inf_rhs = 0.0;
    } else if (f3 == 0.0) {
      inf_rhs = pi1 * f2;
    } else {
      const double eps_opt = std::pow(gamma * f2 / f3, 1.0 / (gamma + 1.0));
      inf_rhs = eps_opt < 1.0 ? eps_rhs(eps_opt) : pi1 * (f2 + f3);
    }
    bool eps_ok = f1 <= inf_rhs;
    for (int g = 1; g < 200 && eps_ok; ++g) {
      const double eps = std::pow(10.0, -12.0 * g / 200.0);
      eps_ok = f1 <= eps_rhs(eps);
    }
    if (f2 > 0.0 && f3 > 0.0) {
      const double eps_star = std::pow(f2 / f3, 1.0 / (gamma + 1.0));
      if (eps_star < 1.0) eps_ok = eps_ok && f1 <= eps_rhs(eps_star);
    }
    out.eps_form_holds = out.eps_form_holds && eps_ok;

    const double product = out.pi2 * std::pow(f2, 1.0 - theta) * std::pow(f3, theta);
    const bool product_ok = f1 <= product * (1.0 + 1e-12);
    out.product_form_holds = out.product_form_holds && product_ok;
    if (f1 > 0.0) {
      const double ratio = product > 0.0 ? f1 / product : std::numeric_limits<double>::infinity();
      out.worst_product_ratio = std::max(out.worst_product_ratio, ratio);
    }
  }
  out.holds = !out.eps_form_holds || out.product_form_holds;
  return out;
}

FunctionalTriple random_functional_triple(Rng& rng, int probes, double theta) {
  if (probes < 1) throw InvalidArgument("need at least one probe");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Vector4d w;
  for (int i = 0; i < 4; ++i) w[i] = normal(rng);
  const double kappa = unit(rng);
  FunctionalTriple t;
  for (int p = 0; p < probes; ++p) {
    Eigen::Vector4d h;
    for (int i = 0; i < 4; ++i) h[i] = normal(rng);
    h *= std::pow(10.0, 4.0 * (unit(rng) - 0.5));
    const double f3 = h.norm();
    const double f2 = std::abs(w.dot(h));
    const double product = std::pow(f2, 1.0 - theta) * std::pow(f3, theta);
    t.f1.push_back(kappa * std::min(f3, product));
    t.f2.push_back(f2);
    t.f3.push_back(f3);
  }
  return t;
}

void InterpolationParams::validate(double horizon) const {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (!(s1 > 0.0 && s1 < s2)) throw InvalidArgument("need 0 < S1 < S2");
  if (s2 > horizon * (1.0 + 1e-12)) throw InvalidArgument("S2 must not exceed T");
}

InterpolationReport verify_integral_interpolation(const SpectralDomain& domain,
                                                  const PhysicalParams& params,
                                                  const SpaceTimeSet& set,
                                                  const InterpolationParams& ip,
                                                  const std::vector<SpectralState>& batch,
                                                  const ObservationSelector& selector) {
  require_same_grid(domain, set);
  const GoodTimeSet e = good_time_set(set, enclosing_ball(set.grid()));
  return verify_integral_interpolation(domain, params, set, e.times, ip, batch, selector);
}

InterpolationReport verify_integral_interpolation(const SpectralDomain& domain,
                                                  const PhysicalParams& params,
                                                  const SpaceTimeSet& set, const TimeMask& times,
                                                  const InterpolationParams& ip,
                                                  const std::vector<SpectralState>& batch,
                                                  const ObservationSelector& selector) {
  require_same_grid(domain, set);
  require_same_times(set, times);
  ip.validate(set.horizon());
  InterpolationReport report;
  report.e_measure = times.measure_between(ip.s1, ip.s2);
  if (!(report.e_measure > 0.0)) {
    throw InvalidArgument("E cap [S1, S2] has measure zero");
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const SpectralState& z = batch[i];
    InterpolationItem item;
    item.lhs = evolve(z, domain, params, ip.s2).norm();
    if (!z.is_zero()) {
      item.observation =
          integrated_observation(domain, params, selector, z, set, times, ip.s1, ip.s2);
      item.rhs0 = std::pow(item.observation / report.e_measure, 1.0 - ip.theta) *
                  std::pow(z.norm(), ip.theta);
      if (!(item.rhs0 > 0.0)) {
        throw PropertyViolation("time-integrated observation vanished for batch item " +
                                std::to_string(i));
      }
      item.ratio = item.lhs / item.rhs0;
      report.k_hat = std::max(report.k_hat, item.ratio);
    }
    report.items.push_back(item);
  }
  if (!std::isfinite(report.k_hat)) throw NumericalError("empirical constant is not finite");
  if (report.k_hat > 0.0) {
    const double q = ip.s2 / (1.0 - ip.theta) + 1.0 / (ip.theta * ip.s1);
    report.m_hat = solve_m_exp(report.k_hat * std::pow(report.e_measure, 3.0), q);
  }
  return report;
}

SpectralState direction_transform(const SpectralState& z, double mu1, double mu2) {
  SpectralState phi(z.size());
  for (int j = 0; j < z.size(); ++j) {
    phi[j] = {mu1 * z[j][0] + mu2 * z[j][1], mu1 * z[j][1] - mu2 * z[j][0]};
  }
  return phi;
}

InterpolationReport verify_direction_observation(const SpectralDomain& domain,
                                                 const PhysicalParams& params,
                                                 const SpaceTimeSet& set,
                                                 const InterpolationParams& ip, double mu1,
                                                 double mu2,
                                                 const std::vector<SpectralState>& batch) {
  const ObservationSelector sel = ObservationSelector::direction(mu1, mu2);
  InterpolationReport report = verify_integral_interpolation(domain, params, set, ip, batch, sel);
  const double scale = mu1 * mu1 + mu2 * mu2;
  const int checks = std::min(8, set.time_cells());
  for (const SpectralState& z : batch) {
    const SpectralState phi = direction_transform(z, mu1, mu2);
    const double expected = scale * z.squared_norm();
    const double amp = std::abs(phi.squared_norm() - expected) / std::max(expected, 1e-300);
    report.amplitude_residual = std::max(report.amplitude_residual, amp);
    for (int i = 0; i < checks; ++i) {
      const int k = (i * set.time_cells()) / checks;
      const double t = set.time_center(k);
      const ObservedField a =
          observe(evolve(phi, domain, params, t), domain, ObservationSelector::first());
      const ObservedField b = observe(evolve(z, domain, params, t), domain, sel);
      for (std::size_t c = 0; c < a.primary.size(); ++c) {
        report.field_residual =
            std::max(report.field_residual, std::abs(a.primary[c] - b.primary[c]));
      }
    }
  }
  if (report.amplitude_residual > 1e-12) {
    throw PropertyViolation("direction transform changed the amplitude identity");
  }
  if (report.field_residual > 1e-10) {
    throw PropertyViolation("direction transform does not reproduce the observed field");
  }
  return report;
}

std::vector<PointwiseConstant> verify_full_observation_pointwise(
    const SpectralDomain& domain, const PhysicalParams& params, const SpaceTimeSet& set,
    double theta, const std::vector<double>& times, const std::vector<SpectralState>& batch) {
  require_same_grid(domain, set);
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  const GoodTimeSet e = good_time_set(set, enclosing_ball(set.grid()));
  std::vector<PointwiseConstant> out;
  for (double t : times) {
    if (!(t > 0.0 && t < set.horizon()) || !e.times[e.times.index_of(t)]) {
      throw InvalidArgument("time " + std::to_string(t) + " is not in E");
    }
    const SpatialMask slice_mask = slice(set, t).mask;
    PointwiseConstant pc;
    pc.time = t;
    pc.min_trace = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const SpectralState& z = batch[i];
      if (z.is_zero()) continue;
      const SpectralState w = evolve(z, domain, params, t);
      const double trace = l1_norm(observe(w, domain, ObservationSelector::full()), slice_mask);
      if (!(trace > 0.0)) {
        throw PropertyViolation("full observation vanished for batch item " + std::to_string(i));
      }
      pc.min_trace = std::min(pc.min_trace, trace);
      const double ratio = w.norm() / (std::pow(trace, 1.0 - theta) * std::pow(z.norm(), theta));
      pc.k_hat = std::max(pc.k_hat, ratio);
    }
    if (!std::isfinite(pc.k_hat)) throw NumericalError("pointwise constant is not finite");
    if (pc.k_hat > 0.0) {
      pc.m_hat = solve_m_exp(pc.k_hat, t / (1.0 - theta) + 1.0 / (theta * t));
    }
    if (!std::isfinite(pc.min_trace)) pc.min_trace = 0.0;
    out.push_back(pc);
  }
  return out;
}

namespace {

PointwiseFailure evaluate_failure(const SpectralDomain& domain, const PhysicalParams& params,
                                  CounterexampleState example, double horizon) {
  PointwiseFailure out;
  const SpatialMask everywhere = SpatialMask::full(domain.grid());
  const double lambda = domain.eigenvalue(example.mode);
  const double mode_l1 = grid_mode_l1(domain, example.mode);
  double s_max = 0.0;
  for (double s : example.times) {
    out.first_traces.push_back(observed_trace_l1(example.state, domain, params,
                                                 ObservationSelector::first(), s, everywhere));
    out.full_traces.push_back(observed_trace_l1(example.state, domain, params,
                                                ObservationSelector::full(), s, everywhere));
    out.full_lower.push_back(std::exp(-params.a * lambda * s) * mode_l1);
    s_max = std::max(s_max, s);
  }
  out.terminal_norm = evolve(example.state, domain, params, horizon).norm();
  for (double trace : out.full_traces) {
    if (!(trace > 0.1 * std::exp(-params.a * lambda * s_max))) {
      throw PropertyViolation("full-selector trace of the counterexample is too small");
    }
  }
  out.example = std::move(example);
  return out;
}

}  // namespace

PointwiseFailure pointwise_failure_demo(const SpectralDomain& domain,
                                        const PhysicalParams& params, double s, double horizon,
                                        int mode) {
  if (!(s > 0.0 && s < horizon)) throw InvalidArgument("observation time must lie in (0, T)");
  if (mode < 0 || mode >= domain.n_modes()) throw InvalidArgument("mode index out of range");
  const double phase = domain.eigenvalue(mode) * params.b * s;
  CounterexampleState ex;
  ex.mode = mode;
  ex.a = params.a;
  ex.b = params.b;
  ex.times = {s};
  ex.state = SpectralState::single_mode(domain.n_modes(), mode, -std::sin(phase), std::cos(phase));
  return evaluate_failure(domain, params, std::move(ex), horizon);
}

PointwiseFailure pointwise_failure_demo_multi(const SpectralDomain& domain,
                                              const PhysicalParams& params, int m,
                                              double horizon) {
  if (m < 1) throw InvalidArgument("need at least one observation time");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const double spacing_bound = horizon / (m + 1);
  int mode = -1;
  for (int j = 0; j < domain.n_modes(); ++j) {
    const double period = 2.0 * std::numbers::pi / (std::abs(params.b) * domain.eigenvalue(j));
    if (period <= spacing_bound * (1.0 + 1e-12)) {
      mode = j;
      break;
    }
  }
  if (mode < 0) {
    throw InsufficientTruncation("no stored mode has period <= T/(m+1); raise n_modes");
  }
  const double lambda = domain.eigenvalue(mode);
  CounterexampleState ex;
  ex.mode = mode;
  ex.a = params.a;
  ex.b = params.b;
  for (int i = 1; i <= m; ++i) {
    const double shift = 2.0 * i * std::numbers::pi / (params.b * lambda);
    ex.times.push_back(params.b > 0.0 ? shift : horizon + shift);
  }
  const double phase = lambda * params.b * ex.times.front();
  ex.state = SpectralState::single_mode(domain.n_modes(), mode, -std::sin(phase), std::cos(phase));
  return evaluate_failure(domain, params, std::move(ex), horizon);
}

TelescopeReport telescope_chain_demo(const SpectralDomain& domain, const PhysicalParams& params,
                                     const SpaceTimeSet& set, const TelescopeOptions& options,
                                     const std::vector<SpectralState>& batch) {
  require_same_grid(domain, set);
  if (batch.empty()) throw InvalidArgument("telescope demo needs a nonempty batch");
  if (set.count() == 0) throw InvalidArgument("observation set has measure zero");
  const SpatialGrid& g = set.grid();
  double radius = options.radius;
  if (!(radius > 0.0)) {
    radius = 0.25 * std::min(set.horizon(), g.length_x);
    if (g.dimension == 2) radius = std::min(radius, 0.25 * g.length_y);
  }

  TelescopeReport report;
  const LocalizedSet local = localize(set, radius);
  report.center = local.center;
  report.center_time = local.center_time;
  report.radius = radius;
  report.local_density = local.density;
  const GoodTimeSet e = good_time_set(local.set, local.spatial_ball);
  report.e_measure = e.times.measure();
  const DensityPoint point =
      find_density_point(e.times, {radius / 2.0, radius / 4.0, radius / 8.0, radius / 16.0});
  report.density_point = point.time;
  report.density_proxy = point.proxy;
  report.sequence = telescoping_sequence(e.times, point.time, options.beta, options.depth);
  const DensitySequence& seq = report.sequence;
  const double beta = options.beta;
  const double mu = seq.mu;
  const int depth = options.depth;
  report.theta = beta / (1.0 + beta);
  const double theta = report.theta;

  // X[i][m] = ||e^{A l_m} z_i||, obs[i][m] = ring observation (1-based m).
  const std::size_t nz = batch.size();
  std::vector<std::vector<double>> x(nz, std::vector<double>(depth + 3, 0.0));
  std::vector<std::vector<double>> obs(nz, std::vector<double>(depth + 1, 0.0));
  std::vector<double> ring_measure(depth + 1, 0.0);
  for (int m = 1; m <= depth; ++m) {
    ring_measure[m] = e.times.measure_between(seq.term(m + 1), seq.term(m));
  }
  for (std::size_t i = 0; i < nz; ++i) {
    for (int m = 1; m <= depth + 2; ++m) {
      x[i][m] = evolve(batch[i], domain, params, seq.term(m)).norm();
    }
    if (batch[i].is_zero()) continue;
    for (int m = 1; m <= depth; ++m) {
      obs[i][m] = integrated_observation(domain, params, ObservationSelector::first(), batch[i],
                                         local.set, e.times, seq.term(m + 1), seq.term(m));
      if (!(obs[i][m] > 0.0)) {
        throw PropertyViolation("ring " + std::to_string(m) + " observation vanished for item " +
                                std::to_string(i));
      }
    }
  }

  std::vector<double> q(depth + 1, 0.0);
  for (int m = 1; m <= depth; ++m) {
    TelescopeRing ring;
    ring.m = m;
    ring.upper = seq.term(m);
    ring.lower = seq.term(m + 1);
    ring.e_measure = ring_measure[m];
    for (std::size_t i = 0; i < nz; ++i) {
      if (batch[i].is_zero()) continue;
      const double rhs0 = std::pow(obs[i][m] / ring.e_measure, 1.0 - theta) *
                          std::pow(x[i][m + 2], theta);
      ring.k_hat = std::max(ring.k_hat, x[i][m] / rhs0);
    }
    if (!std::isfinite(ring.k_hat)) throw NumericalError("ring constant is not finite");
    q[m] = (beta + 1.0) * std::log(std::max(ring.k_hat, 1e-300)) - std::log(ring.e_measure);
    ring.q = q[m];
    report.rings.push_back(ring);
  }

  double c_hat = 0.0;
  for (int m = 2; m <= depth; ++m) {
    c_hat = std::max(c_hat, (q[m] - q[1]) / (std::pow(mu, m + 2) - std::pow(mu, 3)));
  }
  double log_p = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= depth; ++m) log_p = std::max(log_p, q[m] - c_hat * std::pow(mu, m + 2));
  report.c_hat = c_hat;
  report.log_p_hat = log_p;

  auto weight = [&](int m) { return -c_hat * (beta + 2.0) * std::pow(mu, m); };
  for (std::size_t i = 0; i < nz; ++i) {
    if (batch[i].is_zero()) continue;
    for (int m = 1; m <= depth; ++m) {
      const double diff =
          std::exp(weight(m)) * x[i][m] - std::exp(weight(m + 2)) * x[i][m + 2];
      if (diff > 0.0 && std::log(diff) > log_p + std::log(obs[i][m]) + 1e-9) {
        throw PropertyViolation("ring " + std::to_string(m) + " inequality fails for item " +
                                std::to_string(i));
      }
    }
  }

  // Summed even rings: e^{w(2)} X_2 <= P sum_j obs_{2j} + e^{w(2J+2)} X_{2J+2}.
  const int last_even = depth % 2 == 0 ? depth : depth - 1;
  report.head_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nz; ++i) {
    if (batch[i].is_zero()) continue;
    double sum = 0.0;
    for (int m = 2; m <= last_even; m += 2) sum += obs[i][m];
    const double log_head = weight(2) + std::log(x[i][2]);
    const double a = log_p + std::log(sum);
    const double b = weight(last_even + 2) + std::log(x[i][last_even + 2]);
    const double hi = std::max(a, b);
    const double log_rhs = hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    report.head_margin = std::min(report.head_margin, std::expm1(log_rhs - log_head));
  }
  report.chain_holds = report.head_margin >= -1e-9;
  if (!report.chain_holds) throw PropertyViolation("summed telescoping chain does not dominate");

  const SpectralState& first = batch.front();
  double partial = 0.0;
  for (int m = 1; m <= depth; ++m) {
    TelescopeRing& ring = report.rings[m - 1];
    ring.observation = obs[0][m];
    partial += obs[0][m];
    ring.partial_sum = partial;
    if (!first.is_zero()) {
      ring.difference = std::exp(weight(m)) * x[0][m] - std::exp(weight(m + 2)) * x[0][m + 2];
      ring.bound = std::exp(log_p + std::log(obs[0][m]));
    }
  }

  const TimeMask all = TimeMask::full(set.horizon(), set.time_cells());
  for (std::size_t i = 0; i < nz; ++i) {
    if (batch[i].is_zero()) continue;
    const double total = integrated_observation(domain, params, ObservationSelector::first(),
                                                batch[i], set, all, 0.0, set.horizon());
    if (!(total > 0.0)) throw PropertyViolation("integrated observation over D vanished");
    report.n_hat =
        std::max(report.n_hat, evolve(batch[i], domain, params, set.horizon()).norm() / total);
  }
  return report;
}

}  // namespace obslab
