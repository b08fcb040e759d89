#include "vibronic/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vibronic/analysis.hpp"
#include "vibronic/error.hpp"
#include "vibronic/io.hpp"
#include "vibronic/scenarios.hpp"
#include "vibronic/verification.hpp"

namespace vibronic::cli {

namespace {

using io::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

json manifest(const std::string& subcommand, const std::string& config,
              const std::filesystem::path& out_dir, json outcome) {
  return json{{"tool", "vibronic"},
              {"version", std::string(io::kToolVersion)},
              {"subcommand", subcommand},
              {"config_path", config},
              {"output_dir", out_dir.string()},
              {"timestamp", utc_timestamp()},
              {"outcome", std::move(outcome)}};
}

int list_scenarios(std::ostream& out) {
  for (const auto& def : scenario_catalog()) {
    const ScenarioParams& p = def.defaults;
    out << def.name << "\n  " << def.description << "\n"
        << "  modes: " << (def.n_modes == 1 ? "cm" : "cm,stretch")
        << "  initial: " << def.default_initial << "\n"
        << "  params: n_ions=" << p.n_ions
        << (def.required_n_ions ? " (fixed)" : "") << " k=" << p.k
        << (def.required_k ? " (fixed)" : "") << " eta=" << p.eta << " rabi=" << p.rabi;
    if (def.n_modes == 2) out << " rabi_r=" << p.rabi_r;
    out << " tau=" << p.tau << " cutoff=" << kDefaultCutoff << "\n";
    if (!def.measured_outcomes.empty()) {
      out << "  measured outcomes:";
      for (const auto& o : def.measured_outcomes) out << " " << o;
      out << "\n";
    }
  }
  return kExitOk;
}

int run(const std::string& name, const std::string& config,
        const std::filesystem::path& out_dir, std::ostream& out) {
  const ScenarioSpec spec = config.empty() ? default_spec(name) : io::load_config(config, name);
  const ScenarioResult result = run_scenario(spec);
  io::write_json(out_dir / "result.json", io::result_to_json(result));

  json tails = json::array();
  for (double t : result.tails) tails.push_back(t);
  const int code = result.passed() ? kExitOk : kExitNumerical;
  json outcome{{"passed", result.passed()},
               {"fidelity", result.reference_fidelity},
               {"tails", tails},
               {"wall_time", result.wall_time},
               {"exit_code", code}};
  io::write_json(out_dir / "manifest.json", manifest("run", config, out_dir, std::move(outcome)));

  out << result.spec.name << ": fidelity " << io::format_double(result.reference_fidelity)
      << (result.passed() ? "  PASS" : "  FAIL") << "\n";
  for (const auto& o : result.outcomes) {
    out << "  outcome " << o.record.outcome.str() << ": probability "
        << io::format_double(o.record.probability) << ", reference fidelity "
        << io::format_double(o.reference_fidelity) << "\n";
  }
  for (const auto& d : result.diagnostics) out << "  note: " << d << "\n";
  return code;
}

int measure(const std::string& state_path, const std::string& outcome_text,
            const std::string& out_path, std::ostream& out) {
  const io::StateFile state = io::load_state(state_path);
  const JointSpace js = state.space();
  const MeasurementRecord record =
      measure_internal(state.amplitudes, js, Bitstring::parse(outcome_text));
  const json j = io::measurement_to_json(record, state.cutoffs);
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    io::write_json(out_path, j);
    out << "outcome " << record.outcome.str() << ": probability "
        << io::format_double(record.probability) << "\n";
  }
  return kExitOk;
}

int verify(bool deep, std::ostream& out) {
  const auto checks = run_verification(deep);
  bool all = true;
  out << std::left << std::setw(12) << "suite" << std::setw(64) << "check" << std::setw(14)
      << "value" << std::setw(10) << "bound" << "result\n";
  for (const auto& c : checks) {
    std::ostringstream value;
    value << std::scientific << std::setprecision(2) << c.value;
    std::ostringstream bound;
    bound << std::scientific << std::setprecision(0) << c.threshold;
    out << std::left << std::setw(12) << c.suite << std::setw(64) << c.name << std::setw(14)
        << value.str() << std::setw(10) << bound.str() << (c.passed ? "PASS" : "FAIL") << "\n";
    all = all && c.passed;
  }
  out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? kExitOk : kExitNumerical;
}

int wigner(const std::string& state_path, const WignerGridSpec& grid_spec,
           const std::string& out_path, std::ostream& out) {
  const io::StateFile state = io::load_state(state_path);
  if (state.n_ions != 0 || state.cutoffs.size() != 1) {
    throw InvalidArgument("wigner needs a single-mode motional state (e.g. a measurement "
                          "record written by `measure`)");
  }
  const WignerGrid grid = wigner_grid(state.amplitudes, grid_spec);
  const std::filesystem::path path(out_path);
  if (path.extension() == ".json") {
    io::write_json(path, io::wigner_to_json(grid));
  } else {
    io::write_atomic(path, io::wigner_csv(grid));
  }
  out << "wrote " << grid.xs.size() << "x" << grid.ps.size() << " grid to " << out_path;
  if (grid.flagged > 0) out << " (" << grid.flagged << " points clamped: truncation)";
  out << "\n";
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trapped-ion conditional displacement and squeezing simulator", "vibronic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  auto* list_cmd = app.add_subcommand("list-scenarios", "Print the scenario catalog");

  std::string scenario;
  std::string config;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write result.json + manifest.json");
  run_cmd->add_option("--scenario", scenario, "Scenario name")->required();
  run_cmd->add_option("--config", config, "Config file (key = value lines or JSON)");
  run_cmd->add_option("--out", out_dir, "Output directory (default: $OUTPUT_DIR or ./out)");

  std::string state_path;
  std::string outcome;
  std::string measure_out;
  auto* measure_cmd = app.add_subcommand("measure", "Project a joint state on an internal outcome");
  measure_cmd->add_option("--state", state_path, "State or result JSON file")->required();
  measure_cmd->add_option("--outcome", outcome, "Bitstring over {d,u}, e.g. du")->required();
  measure_cmd->add_option("--out", measure_out, "Write the measurement record here");

  bool deep = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the self-check suites");
  verify_cmd->add_flag("--deep", deep, "Also re-run the scenario figures at doubled cutoffs");

  WignerGridSpec grid;
  std::string wigner_state;
  std::string wigner_out;
  auto* wigner_cmd = app.add_subcommand("wigner", "Wigner function of a single-mode state");
  wigner_cmd->add_option("--state", wigner_state, "Motional state JSON")->required();
  wigner_cmd->add_option("--xmin", grid.x_min)->required();
  wigner_cmd->add_option("--xmax", grid.x_max)->required();
  wigner_cmd->add_option("--pmin", grid.p_min)->required();
  wigner_cmd->add_option("--pmax", grid.p_max)->required();
  wigner_cmd->add_option("--res", grid.resolution, "Points per axis")->required();
  wigner_cmd->add_option("--out", wigner_out, "Output CSV (or .json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list_cmd) return list_scenarios(out);
    if (*run_cmd) {
      return run(scenario, config, out_dir.empty() ? default_output_dir() : std::filesystem::path(out_dir), out);
    }
    if (*measure_cmd) return measure(state_path, outcome, measure_out, out);
    if (*verify_cmd) return verify(deep, out);
    if (*wigner_cmd) return wigner(wigner_state, grid, wigner_out, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vibronic::cli
