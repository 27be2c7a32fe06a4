#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "obslab/geometry.hpp"
#include "obslab/semigroup.hpp"
#include "obslab/spectral.hpp"

namespace obslab::lab {

// A config value failed to parse or validate. `field` is "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;

  // [domain]
  std::string domain_kind = "interval";
  double length_x = 3.141592653589793;
  double length_y = 3.141592653589793;
  int n_modes = 0;  // 0: default for the kind
  int cells_x = 0;
  int cells_y = 0;

  // [params]
  double a = 1.0;
  double b = 1.0;

  // [time]
  double horizon = 1.0;
  int time_cells = 64;

  // [observation]
  std::string generator = "random";  // full | random | fixture
  double fraction = 0.3;
  std::uint64_t observation_seed = 1;
  std::string fixture;

  // [selector]
  std::string selector = "first";  // first | direction | full
  double mu1 = 1.0;
  double mu2 = 0.0;

  // [interp]
  double theta = 0.5;
  double beta = 2.0;
  double s1 = 0.25;
  double s2 = 1.0;
  int depth = 6;
  int batch = 32;
  int triples = 100;
  int probes = 16;

  // [simulate]
  int simulate_mode = 1;
  double simulate_phase = 0.0;

  // [counterexample]
  int counterexample_mode = 1;
  double counterexample_time = 0.5;
  int multi = 0;

  // [control]
  int control_modes = 8;
  int control_cells = 128;
  int control_time_cells = 64;
  int v0_mode = 1;
  double tol = 1e-2;
  int duality_probes = 100;
  int iterations = 10000;
  int restarts = 64;
  double nu1 = -0.5;
  double nu2 = 0.5;
  double radius = 0.2;
  double t_max = 2.0;
  int optimal_modes = 1;
  int optimal_time_cells = 128;

  // [sweep]
  int remez_cases = 10000;
  int sine_cases = 10000;
  int sublevel_cases = 1000;
  int geometry_cases = 1000;

  // Applies "section.key = value"; throws ConfigError for unknown keys or bad values.
  void set(const std::string& field, const std::string& value);
  // Throws ConfigError naming the first offending field.
  void validate() const;
  // Canonical "section.key = value" lines; feeds the experiment id.
  std::string canonical() const;

  SpectralDomain domain() const;
  PhysicalParams params() const { return PhysicalParams(a, b); }
  ObservationSelector observation_selector() const;
  // Observation set on the domain grid from the configured generator.
  SpaceTimeSet observation_set(const SpectralDomain& domain) const;
};

// Parses the sectioned key = value format. Lines starting with '#' or ';' are comments.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace obslab::lab
