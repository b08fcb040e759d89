#pragma once

// File formats shared by the CLI: scenario configs, state/result JSON,
// measurement records, run manifests and Wigner/number-distribution CSV.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vibronic/analysis.hpp"
#include "vibronic/scenarios.hpp"

namespace vibronic::io {

using nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.3.0";

/// A state together with the layout it lives on. n_ions = 0 marks a purely
/// motional state.
struct StateFile {
  int n_ions = 0;
  std::vector<int> cutoffs;
  StateVector amplitudes;

  /// Joint space for n_ions ≥ 1.
  JointSpace space() const;
};

/// Parses a scenario config: either one JSON object or `key = value` lines
/// (`#` starts a comment). `scenario` / `name` selects the protocol unless
/// `name_override` is given. Throws InvalidArgument on malformed input.
ScenarioSpec parse_config(std::string_view text, std::string_view name_override = {});
ScenarioSpec load_config(const std::filesystem::path& path,
                         std::string_view name_override = {});

json params_to_json(const ScenarioSpec& spec);
json amplitudes_to_json(const StateVector& v);
StateVector amplitudes_from_json(const json& j);

json state_to_json(const StateFile& state);
/// Accepts a state file, a result.json (joint state) or a measurement record
/// (its post_state).
StateFile state_from_json(const json& j);
StateFile load_state(const std::filesystem::path& path);

json result_to_json(const ScenarioResult& result);
json measurement_to_json(const MeasurementRecord& record,
                         const std::vector<int>& cutoffs);

std::string wigner_csv(const WignerGrid& grid);
json wigner_to_json(const WignerGrid& grid);
std::string distribution_csv(const std::vector<double>& p);

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace vibronic::io
