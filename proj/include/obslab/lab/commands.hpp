#pragma once

#include <string>
#include <utility>
#include <vector>

#include "obslab/lab/config.hpp"
#include "obslab/lab/report.hpp"

namespace obslab::lab {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitNumerical = 3,
  kExitViolation = 4,
};

const std::vector<std::string>& subcommands();

// Experiment id: FNV-1a of the canonical config, the subcommand and the seed.
std::string experiment_id(const std::string& subcommand, const ExperimentConfig& config);

struct RunResult {
  int exit_code = kExitOk;
  RunReport report;
  std::string directory;  // out_root/<id>, empty when nothing was written
  std::string message;    // error text for nonzero exit codes
};

// Runs a subcommand on a validated config without touching the disk.
RunResult execute(const std::string& subcommand, const ExperimentConfig& config);

// execute() followed by writing the report under out_root/<id>/.
RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& config,
                         const std::string& out_root);

struct RunRequest {
  std::string subcommand;
  std::string config_path;  // empty: built-in defaults
  std::vector<std::pair<std::string, std::string>> overrides;  // "section.key", value
  std::string out_root = "out";
};

// Loads the config, applies overrides, validates and runs. Parse failures
// return kExitParse with the offending field in `message`.
RunResult run(const RunRequest& request);

}  // namespace obslab::lab
