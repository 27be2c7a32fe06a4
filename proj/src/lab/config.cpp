#include "obslab/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "obslab/errors.hpp"
#include "obslab/random.hpp"

namespace obslab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a finite number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError(field, "expected an integer, got '" + text + "'");
  return v;
}

int parse_int(const std::string& field, const std::string& text) {
  const long long v = parse_integer(field, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "integer out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& field, const std::string& text) {
  if (text.empty() || text[0] == '-') throw ConfigError(field, "expected a nonnegative integer");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a nonnegative integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError(field, "expected a nonnegative integer");
  return v;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string name;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Field real(std::string name, double ExperimentConfig::*member) {
  return {std::move(name),
          [member](ExperimentConfig& c, const std::string& f, const std::string& v) {
            c.*member = parse_double(f, v);
          },
          [member](const ExperimentConfig& c) { return format_number(c.*member); }};
}

Field integer(std::string name, int ExperimentConfig::*member) {
  return {std::move(name),
          [member](ExperimentConfig& c, const std::string& f, const std::string& v) {
            c.*member = parse_int(f, v);
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field seed(std::string name, std::uint64_t ExperimentConfig::*member) {
  return {std::move(name),
          [member](ExperimentConfig& c, const std::string& f, const std::string& v) {
            c.*member = parse_seed(f, v);
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field text(std::string name, std::string ExperimentConfig::*member) {
  return {std::move(name),
          [member](ExperimentConfig& c, const std::string&, const std::string& v) {
            c.*member = v;
          },
          [member](const ExperimentConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> all = {
      seed("seed", &C::seed),
      text("domain.kind", &C::domain_kind),
      real("domain.length_x", &C::length_x),
      real("domain.length_y", &C::length_y),
      integer("domain.n_modes", &C::n_modes),
      integer("domain.cells_x", &C::cells_x),
      integer("domain.cells_y", &C::cells_y),
      real("params.a", &C::a),
      real("params.b", &C::b),
      real("time.horizon", &C::horizon),
      integer("time.cells", &C::time_cells),
      text("observation.generator", &C::generator),
      real("observation.fraction", &C::fraction),
      seed("observation.seed", &C::observation_seed),
      text("observation.fixture", &C::fixture),
      text("selector.kind", &C::selector),
      real("selector.mu1", &C::mu1),
      real("selector.mu2", &C::mu2),
      real("interp.theta", &C::theta),
      real("interp.beta", &C::beta),
      real("interp.s1", &C::s1),
      real("interp.s2", &C::s2),
      integer("interp.depth", &C::depth),
      integer("interp.batch", &C::batch),
      integer("interp.triples", &C::triples),
      integer("interp.probes", &C::probes),
      integer("simulate.mode", &C::simulate_mode),
      real("simulate.phase", &C::simulate_phase),
      integer("counterexample.mode", &C::counterexample_mode),
      real("counterexample.time", &C::counterexample_time),
      integer("counterexample.multi", &C::multi),
      integer("control.modes", &C::control_modes),
      integer("control.cells", &C::control_cells),
      integer("control.time_cells", &C::control_time_cells),
      integer("control.v0_mode", &C::v0_mode),
      real("control.tol", &C::tol),
      integer("control.duality_probes", &C::duality_probes),
      integer("control.iterations", &C::iterations),
      integer("control.restarts", &C::restarts),
      real("control.nu1", &C::nu1),
      real("control.nu2", &C::nu2),
      real("control.radius", &C::radius),
      real("control.t_max", &C::t_max),
      integer("control.optimal_modes", &C::optimal_modes),
      integer("control.optimal_time_cells", &C::optimal_time_cells),
      integer("sweep.remez_cases", &C::remez_cases),
      integer("sweep.sine_cases", &C::sine_cases),
      integer("sweep.sublevel_cases", &C::sublevel_cases),
      integer("sweep.geometry_cases", &C::geometry_cases),
  };
  return all;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

void ExperimentConfig::set(const std::string& field, const std::string& value) {
  for (const Field& f : fields()) {
    if (f.name == field) {
      f.set(*this, field, trim(value));
      return;
    }
  }
  throw ConfigError(field, "unknown configuration key");
}

void ExperimentConfig::validate() const {
  require(domain_kind == "interval" || domain_kind == "rectangle", "domain.kind",
          "must be 'interval' or 'rectangle'");
  require(length_x > 0.0, "domain.length_x", "must be positive");
  require(length_y > 0.0, "domain.length_y", "must be positive");
  require(n_modes >= 0, "domain.n_modes", "must be positive (0 selects the default)");
  require(cells_x >= 0, "domain.cells_x", "must be positive (0 selects the default)");
  require(cells_y >= 0, "domain.cells_y", "must be positive (0 selects the default)");
  require(a > 0.0, "params.a", "diffusion a must be positive");
  require(b != 0.0, "params.b", "coupling b must be nonzero");
  require(horizon > 0.0, "time.horizon", "must be positive");
  require(time_cells >= 2, "time.cells", "must be at least 2");
  require(generator == "full" || generator == "random" || generator == "fixture",
          "observation.generator", "must be 'full', 'random' or 'fixture'");
  require(fraction > 0.0 && fraction <= 1.0, "observation.fraction", "must lie in (0, 1]");
  require(generator != "fixture" || !fixture.empty(), "observation.fixture",
          "required when observation.generator = fixture");
  require(selector == "first" || selector == "direction" || selector == "full", "selector.kind",
          "must be 'first', 'direction' or 'full'");
  require(std::abs(mu1) + std::abs(mu2) > 0.0, "selector.mu1",
          "direction (mu1, mu2) must be nonzero");
  require(theta > 0.0 && theta < 1.0, "interp.theta", "must lie in (0, 1)");
  require(beta > 0.0, "interp.beta", "must be positive");
  require(s1 > 0.0, "interp.s1", "must be positive");
  require(s1 < s2, "interp.s1", "must be less than interp.s2");
  require(s2 <= horizon, "interp.s2", "must not exceed time.horizon");
  require(depth >= 2, "interp.depth", "must be at least 2");
  require(batch >= 1, "interp.batch", "must be positive");
  require(triples >= 0, "interp.triples", "must be nonnegative");
  require(probes >= 1, "interp.probes", "must be positive");
  require(simulate_mode >= 1, "simulate.mode", "modes are numbered from 1");
  require(counterexample_mode >= 1, "counterexample.mode", "modes are numbered from 1");
  require(counterexample_time > 0.0 && counterexample_time < horizon, "counterexample.time",
          "must lie in (0, time.horizon)");
  require(multi >= 0, "counterexample.multi", "must be nonnegative");
  require(control_modes >= 1, "control.modes", "must be positive");
  require(control_cells >= 1, "control.cells", "must be positive");
  require(control_time_cells >= 1, "control.time_cells", "must be positive");
  require(v0_mode >= 1 && v0_mode <= control_modes, "control.v0_mode",
          "must lie in 1..control.modes");
  require(tol > 1e-6 && tol < 1e-1, "control.tol", "must lie in (1e-6, 1e-1)");
  require(duality_probes >= 0, "control.duality_probes", "must be nonnegative");
  require(iterations >= 1, "control.iterations", "must be positive");
  require(restarts >= 0, "control.restarts", "must be nonnegative");
  require(nu1 < nu2, "control.nu1",
          "must be less than control.nu2 (got " + format_number(nu1) + " >= " +
              format_number(nu2) + ")");
  require(radius > 0.0, "control.radius", "target radius must be positive");
  require(radius < 1.0, "control.radius", "the unit initial state must lie outside the target");
  require(t_max > 0.0, "control.t_max", "must be positive");
  require(optimal_modes >= 1, "control.optimal_modes", "must be positive");
  require(optimal_time_cells >= 1, "control.optimal_time_cells", "must be positive");
  require(remez_cases >= 0, "sweep.remez_cases", "must be nonnegative");
  require(sine_cases >= 0, "sweep.sine_cases", "must be nonnegative");
  require(sublevel_cases >= 0, "sweep.sublevel_cases", "must be nonnegative");
  require(geometry_cases >= 0, "sweep.geometry_cases", "must be nonnegative");
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const Field& f : fields()) out += f.name + " = " + f.get(*this) + "\n";
  return out;
}

SpectralDomain ExperimentConfig::domain() const {
  if (domain_kind == "rectangle") {
    return SpectralDomain::rectangle(
        length_x, length_y, n_modes > 0 ? n_modes : SpectralDomain::kDefaultRectangleModes,
        cells_x > 0 ? cells_x : SpectralDomain::kDefaultRectangleCells,
        cells_y > 0 ? cells_y : SpectralDomain::kDefaultRectangleCells);
  }
  return SpectralDomain::interval(length_x,
                                  n_modes > 0 ? n_modes : SpectralDomain::kDefaultIntervalModes,
                                  cells_x > 0 ? cells_x : SpectralDomain::kDefaultIntervalCells);
}

ObservationSelector ExperimentConfig::observation_selector() const {
  if (selector == "direction") return ObservationSelector::direction(mu1, mu2);
  if (selector == "full") return ObservationSelector::full();
  return ObservationSelector::first();
}

SpaceTimeSet ExperimentConfig::observation_set(const SpectralDomain& domain) const {
  if (generator == "full") return SpaceTimeSet::full(domain.grid(), time_cells, horizon);
  if (generator == "fixture") {
    std::ifstream in(fixture);
    if (!in) throw ConfigError("observation.fixture", "cannot open '" + fixture + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    SpaceTimeSet set;
    try {
      set = from_rle(buffer.str());
    } catch (const InvalidArgument& e) {
      throw ConfigError("observation.fixture", e.what());
    }
    if (!(set.grid() == domain.grid()) || set.time_cells() != time_cells ||
        std::abs(set.horizon() - horizon) > 1e-12 * horizon) {
      throw ConfigError("observation.fixture", "fixture grid does not match the configured grid");
    }
    return set;
  }
  Rng rng(case_seed(observation_seed, 0));
  return random_space_time_set(rng, domain.grid(), time_cells, horizon, fraction);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(number), "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    config.set(section.empty() ? key : section + "." + key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace obslab::lab
