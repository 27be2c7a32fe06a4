#include "obslab/lab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>

#include "obslab/control.hpp"
#include "obslab/errors.hpp"
#include "obslab/geometry.hpp"
#include "obslab/interp.hpp"
#include "obslab/random.hpp"
#include "obslab/remez.hpp"

namespace obslab::lab {

namespace {

constexpr double kPi = 3.141592653589793;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Raised when an asserted property fails but the report is complete.
struct Violations {
  std::vector<std::string> items;
  void check(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

Rng stream(const ExperimentConfig& config, std::uint64_t tag) {
  return Rng(case_seed(config.seed, tag));
}

std::vector<SpectralState> random_batch(const ExperimentConfig& config, int n_modes,
                                        std::uint64_t tag) {
  std::vector<SpectralState> batch;
  for (int i = 0; i < config.batch; ++i) {
    Rng rng(case_seed(config.seed, tag * 1000003ULL + static_cast<std::uint64_t>(i)));
    batch.push_back(random_state(rng, n_modes));
  }
  return batch;
}

SpectralDomain control_domain(const ExperimentConfig& config, int modes) {
  if (config.domain_kind == "rectangle") {
    return SpectralDomain::rectangle(config.length_x, config.length_y, modes, config.control_cells,
                                     config.control_cells);
  }
  return SpectralDomain::interval(config.length_x, modes, config.control_cells);
}

SpaceTimeSet control_region(const ExperimentConfig& config, const SpectralDomain& domain) {
  ExperimentConfig copy = config;
  copy.time_cells = config.control_time_cells;
  return copy.observation_set(domain);
}

CsvSeries field_series(const ControlField& field) {
  const SpaceTimeSet& region = field.region;
  const SpatialGrid& grid = region.grid();
  CsvSeries csv{"control_field.csv", {}, {}};
  csv.header = grid.dimension == 1 ? std::vector<std::string>{"x", "t", "value"}
                                   : std::vector<std::string>{"x", "y", "t", "value"};
  for (int k = 0; k < region.time_cells(); ++k) {
    for (int c = 0; c < region.space_cells(); ++c) {
      if (!region.at(k, c)) continue;
      const auto p = grid.center(c);
      if (grid.dimension == 1) {
        csv.rows.push_back({p[0], region.time_center(k), field.at(k, c)});
      } else {
        csv.rows.push_back({p[0], p[1], region.time_center(k), field.at(k, c)});
      }
    }
  }
  return csv;
}

// ---------------------------------------------------------------------------

void cmd_simulate(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = config.domain();
  const PhysicalParams params = config.params();
  const int mode = config.simulate_mode - 1;
  if (mode >= domain.n_modes()) {
    throw InvalidArgument("simulate.mode exceeds the domain truncation");
  }
  const double phi = config.simulate_phase;
  const SpectralState z = SpectralState::single_mode(domain.n_modes(), mode, std::cos(phi),
                                                     -std::sin(phi));
  const double lambda = domain.eigenvalue(mode);
  const SpatialMask everywhere = SpatialMask::full(domain.grid());
  CsvSeries csv{"trace.csv", {"t", "v1", "abs_v1", "v2", "norm", "observed_l1"}, {}};
  double residual = 0.0;
  for (int k = 0; k <= config.time_cells; ++k) {
    const double t = config.horizon * k / config.time_cells;
    const SpectralState s = evolve(z, domain, params, t);
    const double v1 = s[mode][0];
    const double closed =
        std::exp(-params.a * lambda * t) * std::abs(std::cos(lambda * params.b * t + phi));
    residual = std::max(residual, std::abs(std::abs(v1) - closed));
    const double l1 = observed_trace_l1(z, domain, params, ObservationSelector::first(), t,
                                        everywhere);
    csv.rows.push_back({t, v1, std::abs(v1), s[mode][1], s.norm(), l1});
  }
  report.section("simulate");
  report.add("mode", config.simulate_mode);
  report.add("eigenvalue", lambda);
  report.add("phase", phi);
  report.add("samples", static_cast<int>(csv.rows.size()));
  report.add("closed_form_residual", residual);
  const bool ok = residual <= 1e-12;
  report.add("closed_form_holds", ok);
  v.check(ok, "closed-form trace residual above 1e-12");
  report.attach(std::move(csv));
}

void remez_section(const ExperimentConfig& config, RunReport& report, Violations& v) {
  Stopwatch w;
  const SweepSummary remez = remez_sweep(config.remez_cases, config.seed);
  report.section("remez");
  report.add("cases", remez.cases);
  report.add("violations", remez.violations);
  report.add("worst_ratio", remez.worst_ratio);
  report.add("worst_case", static_cast<std::int64_t>(remez.worst_case));
  report.timing("remez", w.seconds());
  v.check(remez.violations == 0, "remez inequality violated");

  Stopwatch ws;
  const SweepSummary sine = sine_bound_sweep(config.sine_cases, config.seed);
  report.section("sine_bound");
  report.add("cases", sine.cases);
  report.add("violations", sine.violations);
  report.add("worst_ratio", sine.worst_ratio);
  report.add("worst_case", static_cast<std::int64_t>(sine.worst_case));
  report.timing("sine_bound", ws.seconds());
  v.check(sine.violations == 0, "sine integral bound violated");

  Stopwatch wl;
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < config.sublevel_cases; ++i) {
    Rng rng = stream(config, 0x5100000000ULL + static_cast<std::uint64_t>(i));
    TrigPoly f = random_trig_poly(rng, 8);
    while (f.degree() < 1 || f.is_zero()) f = random_trig_poly(rng, 8);
    const double eps = std::uniform_real_distribution<double>(0.05, 2.0 * kPi - 0.05)(rng);
    const SublevelCheck c = sublevel_measure_check(f, eps, 2048);
    if (!c.holds) ++violations;
    worst = std::max(worst, c.measure / eps);
  }
  report.section("sublevel");
  report.add("cases", config.sublevel_cases);
  report.add("violations", violations);
  report.add("worst_measure_ratio", worst);
  report.timing("sublevel", wl.seconds());
  v.check(violations == 0, "sub-level measure estimate violated");
}

void equivalence_section(const ExperimentConfig& config, RunReport& report, Violations& v) {
  Stopwatch w;
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < config.triples; ++i) {
    Rng rng = stream(config, 0x4c00000000ULL + static_cast<std::uint64_t>(i));
    const FunctionalTriple triple = random_functional_triple(rng, config.probes, config.theta);
    const EquivalenceResult r = interp_equivalence(1.0, config.theta, triple);
    if (!r.holds) ++failures;
    worst = std::max(worst, r.worst_product_ratio);
  }
  report.section("equivalence");
  report.add("triples", config.triples);
  report.add("probes", config.probes);
  report.add("pi1", 1.0);
  report.add("pi2", 2.0);
  report.add("failures", failures);
  report.add("worst_product_ratio", worst);
  report.timing("equivalence", w.seconds());
  v.check(failures == 0, "epsilon form held without the product form");
}

void cmd_interp(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = config.domain();
  const PhysicalParams params = config.params();
  const SpaceTimeSet set = config.observation_set(domain);
  const InterpolationParams ip{config.theta, config.s1, config.s2};
  std::vector<SpectralState> batch = random_batch(config, domain.n_modes(), 1);
  batch.push_back(
      pointwise_failure_demo(domain, params, 0.5 * (config.s1 + config.s2), config.horizon)
          .example.state);

  Stopwatch w;
  const ObservationSelector selector = config.observation_selector();
  InterpolationReport r;
  if (selector.kind() == SelectorKind::Direction) {
    r = verify_direction_observation(domain, params, set, ip, config.mu1, config.mu2, batch);
  } else {
    r = verify_integral_interpolation(domain, params, set, ip, batch, selector);
  }
  double min_obs = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (const auto& item : r.items) {
    min_obs = std::min(min_obs, item.observation);
    max_ratio = std::max(max_ratio, item.ratio);
  }
  report.section("interpolation");
  report.add("selector", config.selector);
  report.add("set_measure", set.measure());
  report.add("batch", static_cast<int>(batch.size()));
  report.add("e_measure", r.e_measure);
  report.add("min_observation", min_obs);
  report.add("max_ratio", max_ratio);
  report.add("k_hat", r.k_hat);
  report.add("m_hat", r.m_hat);
  if (selector.kind() == SelectorKind::Direction) {
    report.add("amplitude_residual", r.amplitude_residual);
    report.add("field_residual", r.field_residual);
  }
  report.timing("interpolation", w.seconds());
  v.check(min_obs > 1e-8, "integrated observation below 1e-8");
  v.check(std::isfinite(r.k_hat), "interpolation constant not finite");

  // K-hat against |E cap [S1, S2]| for nested truncations of E.
  const GoodTimeSet good = good_time_set(set, enclosing_ball(set.grid()));
  CsvSeries csv{"k_vs_measure.csv", {"e_measure", "k_hat", "m_hat"}, {}};
  constexpr int kSteps = 8;
  for (int j = 1; j <= kSteps; ++j) {
    const double cut = config.s1 + (config.s2 - config.s1) * j / kSteps;
    std::vector<std::uint8_t> cells = good.times.cells();
    for (int k = 0; k < good.times.size(); ++k) {
      if (good.times.center(k) > cut) cells[k] = 0;
    }
    const TimeMask times(good.times.horizon(), cells);
    if (times.measure_between(config.s1, config.s2) <= 0.0) continue;
    const InterpolationReport rj =
        verify_integral_interpolation(domain, params, set, times, ip, batch, selector);
    csv.rows.push_back({rj.e_measure, rj.k_hat, rj.m_hat});
  }
  report.add("curve_points", static_cast<int>(csv.rows.size()));
  report.attach(std::move(csv));
  equivalence_section(config, report, v);
}

void cmd_counterexample(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = config.domain();
  const PhysicalParams params = config.params();
  const PointwiseFailure f =
      config.multi > 0
          ? pointwise_failure_demo_multi(domain, params, config.multi, config.horizon)
          : pointwise_failure_demo(domain, params, config.counterexample_time, config.horizon,
                                   config.counterexample_mode - 1);
  const double lambda = domain.eigenvalue(f.example.mode);
  const double terminal_lower = std::exp(-params.a * lambda * config.horizon) - 1e-12;
  report.section("counterexample");
  report.add("mode", f.example.mode + 1);
  report.add("eigenvalue", lambda);
  report.add("times", static_cast<int>(f.example.times.size()));
  double worst_first = 0.0;
  bool full_ok = true;
  CsvSeries csv{"counterexample.csv", {"i", "time", "first_trace", "full_trace", "full_lower"},
                {}};
  for (std::size_t i = 0; i < f.example.times.size(); ++i) {
    const std::string idx = std::to_string(i + 1);
    report.add("time." + idx, f.example.times[i]);
    report.add("first_trace." + idx, f.first_traces[i]);
    report.add("full_trace." + idx, f.full_traces[i]);
    worst_first = std::max(worst_first, f.first_traces[i]);
    full_ok = full_ok && f.full_traces[i] > 0.0;
    csv.rows.push_back({static_cast<double>(i + 1), f.example.times[i], f.first_traces[i],
                        f.full_traces[i], f.full_lower[i]});
  }
  report.add("terminal_norm", f.terminal_norm);
  report.add("terminal_lower", terminal_lower);
  const bool vanish = worst_first <= 1e-10;
  const bool terminal_ok = f.terminal_norm >= terminal_lower;
  report.add("first_traces_vanish", vanish);
  report.add("full_traces_positive", full_ok);
  report.add("terminal_holds", terminal_ok);
  v.check(vanish, "first-component trace above 1e-10");
  v.check(full_ok, "full trace vanished");
  v.check(terminal_ok, "terminal norm below e^{-a lambda T}");
  report.attach(std::move(csv));
}

void cmd_estimate_l(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = control_domain(config, config.control_modes);
  const PhysicalParams params = config.params();
  const SpaceTimeSet set = control_region(config, domain);
  constexpr int kSteps = 8;
  const int nt = set.time_cells();
  // Largest set first: the previous argmin certifies L(smaller) <= L(larger).
  std::vector<std::pair<double, double>> curve;
  std::vector<SpectralState> warm;
  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int j = kSteps; j >= 1; --j) {
    const int keep = (nt * j + kSteps - 1) / kSteps;
    SpaceTimeSet part = SpaceTimeSet::none(set.grid(), nt, set.horizon());
    for (int k = 0; k < keep; ++k) {
      for (int c = 0; c < set.space_cells(); ++c) {
        if (set.at(k, c)) part.set(k, c, true);
      }
    }
    if (part.count() == 0) continue;
    const LEstimate l = estimate_L(domain, params, part, config.restarts, config.seed, warm);
    warm = {l.argmin};
    monotone = monotone && l.value <= previous * (1.0 + 1e-12);
    previous = l.value;
    curve.emplace_back(part.measure(), l.value);
  }
  std::reverse(curve.begin(), curve.end());
  CsvSeries csv{"l_vs_measure.csv", {"d_measure", "l_hat"}, {}};
  for (const auto& [m, l] : curve) csv.rows.push_back({m, l});
  report.section("estimate_l");
  report.add("modes", config.control_modes);
  report.add("set_measure", set.measure());
  report.add("l_hat", curve.empty() ? 0.0 : curve.back().second);
  report.add("points", static_cast<int>(curve.size()));
  report.add("monotone", monotone);
  v.check(monotone, "L-hat decreased on a larger set");
  report.attach(std::move(csv));
}

void cmd_null_control(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = control_domain(config, config.control_modes);
  const NullControlProblem problem{
      domain, config.params(),
      SpectralState::single_mode(domain.n_modes(), config.v0_mode - 1, 1.0, 0.0),
      control_region(config, domain)};
  NullControlOptions options;
  options.iterations = config.iterations;
  options.restarts = config.restarts;
  options.seed = config.seed;
  Stopwatch w;
  const NullControlResult r = synthesize_null_control(problem, config.tol, options);
  report.timing("synthesis", w.seconds());
  const DualityCertificate& c = r.certificate;
  report.section("null_control");
  report.add("modes", config.control_modes);
  report.add("region_measure", problem.region.measure());
  report.add("dual_value", c.dual_value);
  report.add("magnitude", c.magnitude);
  report.add("l_hat", c.l_hat);
  report.add("control_bound", c.control_bound);
  report.add("control_sup", c.control_sup);
  report.add("initial_norm", c.initial_norm);
  report.add("terminal_norm", c.terminal_norm);
  report.add("relative_terminal", c.terminal_norm / c.initial_norm);
  report.add("iterations", c.iterations);
  report.add("supported_in_region", r.control.supported_in_region());
  const DualityCheck d = duality_identity_check(domain, problem.params, problem.v0, r.control,
                                                config.duality_probes, config.seed);
  report.add("duality_probes", d.probes);
  report.add("duality_max_relative_error", d.max_relative_error);
  report.add("duality_holds", d.holds);
  v.check(d.holds, "duality identity error above 1e-8");
  v.check(r.control.supported_in_region(), "control leaves the region");
  report.attach(field_series(r.control));
}

void cmd_time_optimal(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = control_domain(config, config.optimal_modes);
  if (config.v0_mode > domain.n_modes()) {
    throw InvalidArgument("control.v0_mode exceeds control.optimal_modes");
  }
  TimeOptimalProblem problem{domain,
                             config.params(),
                             SpectralState::single_mode(domain.n_modes(), config.v0_mode - 1,
                                                        1.0, 0.0),
                             SpatialMask::full(domain.grid()),
                             config.nu1,
                             config.nu2,
                             config.radius,
                             config.optimal_time_cells};
  Stopwatch w;
  const TimeOptimalResult r = solve_time_optimal(problem, config.t_max);
  report.timing("bisection", w.seconds());
  const BangBangCheck bb = verify_bang_bang(r.control, config.nu1, config.nu2);
  report.section("time_optimal");
  report.add("t_star", r.t_star);
  report.add("distance", r.distance);
  report.add("probes", static_cast<int>(r.trace.size()));
  report.add("interior_fraction", bb.violation_fraction);
  report.add("bang_bang_holds", bb.holds);
  v.check(bb.holds, "interior-value fraction above 5%");
  CsvSeries bis{"bisection.csv", {"horizon", "distance", "feasible"}, {}};
  for (const auto& p : r.trace) bis.rows.push_back({p.horizon, p.distance, p.feasible ? 1.0 : 0.0});
  report.attach(std::move(bis));
  report.attach(field_series(r.control));
}

void cmd_telescope(const ExperimentConfig& config, RunReport& report, Violations& v) {
  const SpectralDomain domain = config.domain();
  const PhysicalParams params = config.params();
  const SpaceTimeSet set = config.observation_set(domain);
  TelescopeOptions options;
  options.beta = config.beta;
  options.depth = config.depth;
  const std::vector<SpectralState> batch = random_batch(config, domain.n_modes(), 2);
  Stopwatch w;
  const TelescopeReport r = telescope_chain_demo(domain, params, set, options, batch);
  report.timing("telescope", w.seconds());
  report.section("telescope");
  report.add("center_x", r.center[0]);
  report.add("center_y", r.center[1]);
  report.add("center_time", r.center_time);
  report.add("radius", r.radius);
  report.add("local_density", r.local_density);
  report.add("e_measure", r.e_measure);
  report.add("density_point", r.density_point);
  report.add("density_proxy", r.density_proxy);
  report.add("mu", r.sequence.mu);
  report.add("theta", r.theta);
  report.add("c_hat", r.c_hat);
  report.add("log_p_hat", r.log_p_hat);
  report.add("head_margin", r.head_margin);
  report.add("chain_holds", r.chain_holds);
  report.add("n_hat", r.n_hat);
  CsvSeries csv{"telescope.csv", {"m", "l_m", "ring_observation", "partial_sum"}, {}};
  bool rings_ok = true;
  for (const auto& ring : r.rings) {
    csv.rows.push_back(
        {static_cast<double>(ring.m), ring.upper, ring.observation, ring.partial_sum});
    rings_ok = rings_ok && ring.difference <= ring.bound;
  }
  report.add("rings", static_cast<int>(r.rings.size()));
  report.add("rings_hold", rings_ok);
  v.check(r.chain_holds, "telescoped chain inequality failed");
  v.check(rings_ok, "ring inequality failed");
  report.attach(std::move(csv));
}

void geometry_section(const ExperimentConfig& config, RunReport& report, Violations& v) {
  Stopwatch w;
  const SpectralDomain domain = config.domain();
  const Ball ball = enclosing_ball(domain.grid());
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config.geometry_cases; ++i) {
    Rng rng = stream(config, 0x6700000000ULL + static_cast<std::uint64_t>(i));
    const double fraction = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    const SpaceTimeSet set = random_space_time_set(rng, domain.grid(), config.time_cells,
                                                   config.horizon, fraction);
    // good_time_set asserts both properties and throws PropertyViolation.
    const GoodTimeSet g = good_time_set(set, ball);
    worst_margin = std::min(worst_margin, g.times.measure() / g.lower_bound);
  }
  report.section("geometry");
  report.add("cases", config.geometry_cases);
  report.add("violations", 0);
  if (config.geometry_cases > 0) report.add("worst_measure_ratio", worst_margin);
  report.timing("geometry", w.seconds());
  (void)v;
}

void cmd_sweep_all(const ExperimentConfig& config, RunReport& report, Violations& v) {
  remez_section(config, report, v);
  equivalence_section(config, report, v);
  geometry_section(config, report, v);
}

using Command = void (*)(const ExperimentConfig&, RunReport&, Violations&);

Command lookup(const std::string& name) {
  if (name == "simulate") return cmd_simulate;
  if (name == "remez") return remez_section;
  if (name == "interp") return cmd_interp;
  if (name == "counterexample") return cmd_counterexample;
  if (name == "estimate-L") return cmd_estimate_l;
  if (name == "null-control") return cmd_null_control;
  if (name == "time-optimal") return cmd_time_optimal;
  if (name == "telescope") return cmd_telescope;
  if (name == "sweep-all") return cmd_sweep_all;
  return nullptr;
}
}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "simulate",     "remez",        "interp",    "counterexample", "estimate-L",
      "null-control", "time-optimal", "telescope", "sweep-all"};
  return names;
}

std::string experiment_id(const std::string& subcommand, const ExperimentConfig& config) {
  return fnv1a_hex(config.canonical() + "subcommand = " + subcommand +
                   "\nseed = " + std::to_string(config.seed) + "\n");
}

RunResult execute(const std::string& subcommand, const ExperimentConfig& config) {
  RunResult result;
  const Command command = lookup(subcommand);
  if (!command) {
    result.exit_code = kExitParse;
    result.message = "unknown subcommand '" + subcommand + "'";
    return result;
  }
  result.report = RunReport(experiment_id(subcommand, config), subcommand, config.seed);
  RunReport& report = result.report;
  report.set_config_echo(config.canonical());
  Violations violations;
  Stopwatch total;
  try {
    command(config, report, violations);
    if (!violations.items.empty()) {
      result.exit_code = kExitViolation;
      report.set_status("property_violation");
      result.message = violations.items.front();
    }
  } catch (const ConfigError& e) {
    result.exit_code = kExitParse;
    report.set_status("invalid_config");
    result.message = e.what();
  } catch (const InvalidArgument& e) {
    result.exit_code = kExitParse;
    report.set_status("invalid_argument");
    result.message = e.what();
  } catch (const PropertyViolation& e) {
    result.exit_code = kExitViolation;
    report.set_status("property_violation");
    result.message = e.what();
  } catch (const ConvergenceError& e) {
    result.exit_code = kExitNumerical;
    report.set_status("convergence_failure");
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitNumerical;
    report.set_status("numerical_failure");
    result.message = e.what();
  }
  if (result.exit_code != kExitOk) {
    report.section("error");
    report.add("message", result.message);
  }
  report.timing("total", total.seconds());
  return result;
}

RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config,
                         const std::string& out_root) {
  RunResult result = execute(subcommand, config);
  if (result.report.empty()) return result;
  const std::string dir = (std::filesystem::path(out_root) / result.report.id()).string();
  try {
    write_report(result.report, dir);
    result.directory = dir;
  } catch (const std::exception& e) {
    result.exit_code = kExitNumerical;
    result.message = e.what();
  }
  return result;
}

RunResult run(const RunRequest& request) {
  ExperimentConfig config;
  try {
    if (!request.config_path.empty()) config = load_config(request.config_path);
    for (const auto& [field, value] : request.overrides) config.set(field, value);
    config.validate();
  } catch (const ConfigError& e) {
    RunResult result;
    result.exit_code = kExitParse;
    result.message = e.what();
    return result;
  }
  return run_experiment(request.subcommand, config, request.out_root);
}

}  // namespace obslab::lab
