#include "vibronic/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vibronic/error.hpp"

namespace vibronic::io {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::string cleaned;
  for (char c : value) {
    if (c != '[' && c != ']') cleaned.push_back(c);
  }
  std::stringstream ss(cleaned);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
  if (out.empty()) throw InvalidArgument("config: '" + key + "' is empty");
  return out;
}

// Applies one key/value pair; values arrive as strings from both formats.
void apply_key(ScenarioSpec& spec, const std::string& key, const std::string& value) {
  ScenarioParams& p = spec.params;
  if (key == "scenario" || key == "name") {
    spec.name = value;
  } else if (key == "n_ions") {
    p.n_ions = to_int(key, value);
  } else if (key == "k") {
    p.k = to_int(key, value);
  } else if (key == "eta") {
    p.eta = to_double(key, value);
  } else if (key == "rabi" || key == "omega") {
    p.rabi = to_double(key, value);
  } else if (key == "rabi_r" || key == "omega_r") {
    p.rabi_r = to_double(key, value);
  } else if (key == "tau") {
    p.tau = to_double(key, value);
  } else if (key == "cutoff") {
    p.cutoffs = {to_int(key, value)};
  } else if (key == "cutoffs") {
    p.cutoffs = to_int_list(key, value);
  } else if (key == "initial" || key == "initial_internal") {
    spec.initial_internal = value;
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

std::string json_scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw InvalidArgument("config: cutoffs must be integers");
      if (!s.empty()) s += ",";
      s += std::to_string(e.get<int>());
    }
    return s;
  }
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw InvalidArgument("config: unsupported value " + v.dump());
}

json space_to_json(int n_ions, const std::vector<int>& cutoffs) {
  std::string ordering = n_ions > 0 ? "internal,cm" : "cm";
  if (cutoffs.size() == 2) ordering += ",stretch";
  return json{{"n_ions", n_ions}, {"cutoffs", cutoffs}, {"ordering", ordering}};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JointSpace StateFile::space() const {
  if (n_ions < 1) throw InvalidArgument("state has no internal degrees of freedom");
  std::vector<FockSpace> modes;
  for (int c : cutoffs) modes.emplace_back(c);
  return JointSpace(IonRegister{n_ions}, std::move(modes));
}

ScenarioSpec parse_config(std::string_view text, std::string_view name_override) {
  std::vector<std::pair<std::string, std::string>> entries;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config: JSON root must be an object");
    for (const auto& [key, value] : j.items()) {
      entries.emplace_back(key, json_scalar_text(value));
    }
  } else {
    std::stringstream ss{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw InvalidArgument("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
      }
      entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
  }

  ScenarioSpec spec;
  for (const auto& [key, value] : entries) {
    if (key == "scenario" || key == "name") spec.name = value;
  }
  if (!name_override.empty()) spec.name = std::string(name_override);
  if (spec.name.empty()) throw InvalidArgument("config: no scenario name given");

  // Explicit keys override the scenario defaults.
  spec.params = find_scenario(spec.name).defaults;
  for (const auto& [key, value] : entries) {
    if (key != "scenario" && key != "name") apply_key(spec, key, value);
  }
  return resolve_spec(spec);
}

ScenarioSpec load_config(const std::filesystem::path& path, std::string_view name_override) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), name_override);
}

json params_to_json(const ScenarioSpec& spec) {
  const ScenarioParams& p = spec.params;
  return json{{"n_ions", p.n_ions}, {"k", p.k},           {"eta", p.eta},
              {"rabi", p.rabi},     {"rabi_r", p.rabi_r}, {"tau", p.tau},
              {"cutoffs", p.cutoffs}, {"initial", spec.initial_internal}};
}

json amplitudes_to_json(const StateVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

StateVector amplitudes_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("amplitudes must be an array");
  StateVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw InvalidArgument("amplitude " + std::to_string(i) + " is not a [re, im] pair");
    }
    v(static_cast<Index>(i)) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

json state_to_json(const StateFile& state) {
  return json{{"space", space_to_json(state.n_ions, state.cutoffs)},
              {"amplitudes", amplitudes_to_json(state.amplitudes)}};
}

StateFile state_from_json(const json& root) {
  const json& j = root.contains("post_state") ? root.at("post_state") : root;
  try {
    StateFile s;
    const json& space = j.at("space");
    s.n_ions = space.at("n_ions").get<int>();
    s.cutoffs = space.at("cutoffs").get<std::vector<int>>();
    s.amplitudes = amplitudes_from_json(j.at("amplitudes"));
    if (s.cutoffs.empty() || s.cutoffs.size() > 2) {
      throw InvalidArgument("state file: expected one or two cutoffs");
    }
    Index dim = s.n_ions > 0 ? IonRegister{s.n_ions}.dim() : 1;
    for (int c : s.cutoffs) dim *= FockSpace{c}.dim();
    if (dim != s.amplitudes.size()) {
      throw InvalidArgument("state file: " + std::to_string(s.amplitudes.size()) +
                            " amplitudes but the declared space has dimension " +
                            std::to_string(dim));
    }
    return s;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("state file: ") + e.what());
  }
}

StateFile load_state(const std::filesystem::path& path) {
  return state_from_json(read_json(path));
}

json result_to_json(const ScenarioResult& r) {
  json tails = json::object();
  for (std::size_t i = 0; i < r.tails.size(); ++i) {
    tails[std::string(to_string(i == 0 ? Mode::cm : Mode::stretch))] = r.tails[i];
  }
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back({{"outcome", o.record.outcome.str()},
                        {"probability", o.record.probability},
                        {"reference_fidelity", o.reference_fidelity}});
  }
  json drives = json::array();
  for (const auto& d : r.drives) {
    drives.push_back({{"mode", std::string(to_string(d.mode))},
                      {"k", d.k},
                      {"eta", d.eta},
                      {"rabi", d.rabi},
                      {"coupling", d.coupling()}});
  }
  return json{{"name", r.spec.name},
              {"params", params_to_json(r.spec)},
              {"drives", drives},
              {"space", space_to_json(r.space.reg().n_ions(), r.space.cutoffs())},
              {"amplitudes", amplitudes_to_json(r.joint_state)},
              {"tails", tails},
              {"fidelity", r.reference_fidelity},
              {"outcomes", outcomes},
              {"diagnostics", r.diagnostics},
              {"passed", r.passed()}};
}

json measurement_to_json(const MeasurementRecord& record, const std::vector<int>& cutoffs) {
  return json{{"outcome", record.outcome.str()},
              {"probability", record.probability},
              {"post_state", state_to_json(StateFile{0, cutoffs, record.post_state})}};
}

std::string wigner_csv(const WignerGrid& grid) {
  std::string out = "p\\x";
  for (double x : grid.xs) out += "," + format_double(x);
  out += "\n";
  for (std::size_t ip = 0; ip < grid.ps.size(); ++ip) {
    out += format_double(grid.ps[ip]);
    for (std::size_t ix = 0; ix < grid.xs.size(); ++ix) {
      out += "," + format_double(grid.values(static_cast<Index>(ip), static_cast<Index>(ix)));
    }
    out += "\n";
  }
  return out;
}

json wigner_to_json(const WignerGrid& grid) {
  json rows = json::array();
  for (Index ip = 0; ip < grid.values.rows(); ++ip) {
    json row = json::array();
    for (Index ix = 0; ix < grid.values.cols(); ++ix) row.push_back(grid.values(ip, ix));
    rows.push_back(std::move(row));
  }
  return json{{"x", grid.xs}, {"p", grid.ps}, {"values", rows}, {"flagged", grid.flagged}};
}

std::string distribution_csv(const std::vector<double>& p) {
  std::string out = "n,P\n";
  for (std::size_t n = 0; n < p.size(); ++n) {
    out += std::to_string(n) + "," + format_double(p[n]) + "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_atomic(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace vibronic::io
