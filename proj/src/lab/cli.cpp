#include "obslab/lab/cli.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obslab/lab/commands.hpp"

namespace obslab::lab {

namespace {

struct SubcommandFlags {
  std::optional<int> sweep;
  std::optional<int> multi;
  std::optional<int> depth;
  std::optional<int> batch;
  std::optional<double> tol;
};

bool is_control(const std::string& name) {
  return name == "estimate-L" || name == "null-control" || name == "time-optimal";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral observability and control lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_root = "out";
  std::optional<int> modes;
  std::optional<int> grid;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "Config file (sectioned key = value)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_root, "Output root directory");
  app.add_option("--modes", modes, "Number of spectral modes")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid, "Spatial cells per axis")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "Override as section.key=value (repeatable)");

  SubcommandFlags flags;
  for (const std::string& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    if (name == "remez" || name == "sweep-all") {
      sub->add_option("--sweep", flags.sweep, "Cases per sweep")->check(CLI::NonNegativeNumber);
    }
    if (name == "counterexample") {
      sub->add_option("--multi", flags.multi, "Number of simultaneous vanishing times")
          ->check(CLI::PositiveNumber);
    }
    if (name == "telescope") {
      sub->add_option("--depth", flags.depth, "Number of rings")->check(CLI::PositiveNumber);
    }
    if (name == "interp" || name == "telescope") {
      sub->add_option("--batch", flags.batch, "Random states per batch")
          ->check(CLI::PositiveNumber);
    }
    if (name == "null-control") {
      sub->add_option("--tol", flags.tol, "Terminal tolerance relative to ||v0||");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  RunRequest request;
  request.subcommand = app.get_subcommands().front()->get_name();
  request.config_path = config_path;
  request.out_root = out_root;
  auto& o = request.overrides;
  if (seed) o.emplace_back("seed", std::to_string(*seed));
  if (modes) {
    if (request.subcommand == "time-optimal") {
      o.emplace_back("control.optimal_modes", std::to_string(*modes));
    } else if (is_control(request.subcommand)) {
      o.emplace_back("control.modes", std::to_string(*modes));
    } else {
      o.emplace_back("domain.n_modes", std::to_string(*modes));
    }
  }
  if (grid) {
    if (is_control(request.subcommand)) {
      o.emplace_back("control.cells", std::to_string(*grid));
    } else {
      o.emplace_back("domain.cells_x", std::to_string(*grid));
      o.emplace_back("domain.cells_y", std::to_string(*grid));
    }
  }
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      err << "error: --set expects section.key=value, got '" << s << "'\n";
      return kExitParse;
    }
    o.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (flags.sweep) {
    o.emplace_back("sweep.remez_cases", std::to_string(*flags.sweep));
    o.emplace_back("sweep.sine_cases", std::to_string(*flags.sweep));
  }
  if (flags.multi) o.emplace_back("counterexample.multi", std::to_string(*flags.multi));
  if (flags.depth) o.emplace_back("interp.depth", std::to_string(*flags.depth));
  if (flags.batch) o.emplace_back("interp.batch", std::to_string(*flags.batch));
  if (flags.tol) o.emplace_back("control.tol", format_double(*flags.tol));

  const RunResult result = run(request);
  if (!result.directory.empty()) {
    out << "status: " << result.report.status() << '\n';
    out << "report: " << result.directory << "/report.txt\n";
  }
  if (result.exit_code != kExitOk) err << "error: " << result.message << '\n';
  return result.exit_code;
}

}  // namespace obslab::lab
