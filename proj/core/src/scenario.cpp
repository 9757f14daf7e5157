#include "semiclassical/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

constexpr std::pair<ScenarioName, std::string_view> kNames[] = {
    {ScenarioName::vortex, "vortex"},
    {ScenarioName::wavepacket, "wavepacket"},
    {ScenarioName::harmonic_focus, "harmonic_focus"},
    {ScenarioName::free_caustic, "free_caustic"},
    {ScenarioName::free_plane, "free_plane"},
    {ScenarioName::rarefaction, "rarefaction"},
};

constexpr std::string_view kOutputNames[] = {"trajectories", "density", "conservation", "classical",
                                             "caustic",      "branches", "measures"};

bool* output_flag(OutputFlags& o, std::string_view name) {
  if (name == "trajectories") return &o.trajectories;
  if (name == "density") return &o.density;
  if (name == "conservation") return &o.conservation;
  if (name == "classical") return &o.classical;
  if (name == "caustic") return &o.caustic;
  if (name == "branches") return &o.branches;
  if (name == "measures") return &o.measures;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& key, const ConfigEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc{} || r.ptr != last || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + e.value + "'", e.line);
  return v;
}

std::size_t parse_count(const std::string& key, const ConfigEntry& e) {
  // Accept integral values written in exponent form (1e4).
  const double v = parse_double(key, e);
  if (v < 0.0 || v != std::floor(v) || v > 1e15)
    throw ConfigError(key + ": expected a nonnegative integer, got '" + e.value + "'", e.line);
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const ConfigEntry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + e.value + "'", e.line);
}

OutputFlags parse_outputs(const std::string& key, const ConfigEntry& e) {
  OutputFlags none{false, false, false, false, false, false, false};
  std::string_view rest = e.value;
  if (trim(rest) == "all") return OutputFlags{};
  if (trim(rest) == "none") return none;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    bool* flag = output_flag(none, item);
    if (flag == nullptr) throw ConfigError(key + ": unknown output '" + std::string(item) + "'", e.line);
    *flag = true;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return none;
}

std::string outputs_text(const OutputFlags& o) {
  std::string out;
  OutputFlags copy = o;
  for (std::string_view name : kOutputNames) {
    if (*output_flag(copy, name)) {
      if (!out.empty()) out += ',';
      out += name;
    }
  }
  return out.empty() ? "none" : out;
}

}  // namespace

std::string_view to_string(ScenarioName name) {
  for (const auto& [n, s] : kNames)
    if (n == name) return s;
  return "unknown";
}

ScenarioName scenario_from_string(std::string_view name) {
  for (const auto& [n, s] : kNames)
    if (s == name) return n;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::vector<ScenarioName> all_scenarios() {
  std::vector<ScenarioName> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

WkbInitialData ScenarioSpec::initial_data() const {
  const AmplitudeProfile bump = AmplitudeProfile::gaussian(0.5, 25.0);
  switch (name) {
    case ScenarioName::vortex:
      // Ground state plus second excited state of the unit harmonic oscillator.
      return {AmplitudeProfile::polynomial_gaussian(0.0, 0.5, {2.0, 0.0, -2.0}), PhaseProfile::zero(), std::nullopt};
    case ScenarioName::wavepacket:
      return {AmplitudeProfile::gaussian(0.0, 1.0), PhaseProfile::zero(), Wavepacket{0.5, 0.0}};
    case ScenarioName::harmonic_focus:
      return {bump, PhaseProfile::zero(), std::nullopt};
    case ScenarioName::free_caustic:
      return {bump, PhaseProfile::logcosh(5.0, 2.5), std::nullopt};
    case ScenarioName::free_plane:
      return {bump, PhaseProfile::plane(0.5), std::nullopt};
    case ScenarioName::rarefaction:
      return {bump, PhaseProfile::quadratic(1.0), std::nullopt};
  }
  throw InvalidArgument("unknown scenario");
}

Potential ScenarioSpec::potential() const {
  switch (name) {
    case ScenarioName::vortex:
      return Potential::harmonic(0.0, 1.0);
    case ScenarioName::harmonic_focus:
      return Potential::harmonic(0.5, 1.0);
    default:
      return Potential::zero();
  }
}

AmplitudeProfile ScenarioSpec::amplitude() const { return initial_data().effective_amplitude(epsilon); }

PhaseProfile ScenarioSpec::phase() const { return initial_data().effective_phase(); }

ClassicalSystem ScenarioSpec::classical_system() const { return ClassicalSystem{phase(), potential(), dt}; }

void ScenarioSpec::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  if (!(length > 0.0 && std::isfinite(length))) throw ConfigError("length must be positive");
  if (modes < 8 || (modes & (modes - 1)) != 0) throw ConfigError("modes must be a power of two >= 8");
  if (!(dt > 0.0 && std::isfinite(dt))) throw ConfigError("dt must be positive");
  if (steps == 0) throw ConfigError("tsteps must be positive");
  if (snapshot_stride == 0 || snapshot_stride > steps) throw ConfigError("snapshot_stride must lie in [1, tsteps]");
  if (seed_count == 0) throw ConfigError("seeds must be positive");
  if (seed_window && !(seed_window->hi > seed_window->lo)) throw ConfigError("seed_lo must be below seed_hi");
  if (density_stride == 0) throw ConfigError("density_stride must be positive");
  if (measure_samples == 0) throw ConfigError("measure_samples must be positive");
}

ScenarioSpec catalog_spec(ScenarioName name) {
  ScenarioSpec s;
  s.name = name;
  double t_end = 1.0;
  switch (name) {
    case ScenarioName::vortex:
      s.epsilon = 1.0;
      s.x0 = -10.0;
      s.length = 20.0;
      s.modes = 256;
      s.density_stride = 1;
      t_end = 2.0 * std::numbers::pi;
      break;
    case ScenarioName::wavepacket:
      t_end = 1.0;
      break;
    case ScenarioName::harmonic_focus:
      t_end = std::numbers::pi;
      break;
    case ScenarioName::free_caustic:
      s.seed_count = 41;
      t_end = 0.6;
      break;
    case ScenarioName::free_plane:
      t_end = 1.0;
      break;
    case ScenarioName::rarefaction:
      s.epsilon = 1e-2;
      s.x0 = -3.0;
      s.length = 8.0;
      t_end = 0.5;
      break;
  }
  s.steps = 10'000;
  s.dt = t_end / static_cast<double>(s.steps);
  s.snapshot_stride = s.steps / 100;
  return s;
}

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty()) throw ConfigError(key + ": empty value", line_no);
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (out.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    out[key] = {value, line_no};
  }
  return out;
}

ConfigMap parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "epsilon",  "x0",      "length",         "modes",           "t_end",
      "dt",       "tsteps",   "snapshot_stride", "seeds",  "seed_lo",         "seed_hi",
      "density_stride",       "measure_samples", "audit_doubling", "outputs"};
  return keys;
}

ScenarioSpec resolve_spec(const ConfigMap& base, const ConfigMap& overrides) {
  ConfigMap m = base;
  for (const auto& [k, v] : overrides) m[k] = v;
  for (const auto& [k, v] : m) {
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'", v.line);
  }
  auto it = m.find("scenario");
  if (it == m.end()) throw ConfigError("no scenario given");
  ScenarioSpec s;
  try {
    s = catalog_spec(scenario_from_string(it->second.value));
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), it->second.line);
  }
  auto get = [&](const char* key) -> const ConfigEntry* {
    auto f = m.find(key);
    return f == m.end() ? nullptr : &f->second;
  };

  if (auto* e = get("epsilon")) {
    s.epsilon = parse_double("epsilon", *e);
    if (!(s.epsilon > 0.0 && s.epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]", e->line);
  }
  if (auto* e = get("x0")) s.x0 = parse_double("x0", *e);
  if (auto* e = get("length")) s.length = parse_double("length", *e);
  if (auto* e = get("modes")) s.modes = parse_count("modes", *e);
  if (auto* e = get("seeds")) s.seed_count = parse_count("seeds", *e);
  if (auto* e = get("density_stride")) s.density_stride = parse_count("density_stride", *e);
  if (auto* e = get("measure_samples")) s.measure_samples = parse_count("measure_samples", *e);
  if (auto* e = get("audit_doubling")) s.audit_doubling = parse_bool("audit_doubling", *e);
  if (auto* e = get("outputs")) s.outputs = parse_outputs("outputs", *e);

  const auto* lo = get("seed_lo");
  const auto* hi = get("seed_hi");
  if ((lo == nullptr) != (hi == nullptr)) throw ConfigError("seed_lo and seed_hi must be given together", (lo ? lo : hi)->line);
  if (lo) s.seed_window = Window{parse_double("seed_lo", *lo), parse_double("seed_hi", *hi)};

  // Time mesh: t_end, dt and tsteps; any two determine the third.
  const auto* te = get("t_end");
  const auto* dt = get("dt");
  const auto* ns = get("tsteps");
  double t_end = s.t_end();
  if (te) t_end = parse_double("t_end", *te);
  if (te && dt && ns) throw ConfigError("t_end, dt and tsteps cannot all be given", te->line);
  const bool steps_changed = ns != nullptr;
  if (ns) s.steps = parse_count("tsteps", *ns);
  if (s.steps == 0) throw ConfigError("tsteps must be positive", ns ? ns->line : 0);
  if (dt) {
    s.dt = parse_double("dt", *dt);
    if (!(s.dt > 0.0)) throw ConfigError("dt must be positive", dt->line);
    if (!ns) {
      const double k = std::round(t_end / s.dt);
      if (k < 1.0) throw ConfigError("dt exceeds the run length", dt->line);
      s.steps = static_cast<std::size_t>(k);
    }
  } else {
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive", te ? te->line : 0);
    s.dt = t_end / static_cast<double>(s.steps);
  }
  if (auto* e = get("snapshot_stride")) {
    s.snapshot_stride = parse_count("snapshot_stride", *e);
  } else if (steps_changed || dt) {
    s.snapshot_stride = std::max<std::size_t>(1, s.steps / 100);
  }
  s.validate();
  return s;
}

std::string to_config_text(const ScenarioSpec& s) {
  std::ostringstream os;
  os << "scenario = " << to_string(s.name) << '\n'
     << "epsilon = " << format_double(s.epsilon) << '\n'
     << "x0 = " << format_double(s.x0) << '\n'
     << "length = " << format_double(s.length) << '\n'
     << "modes = " << s.modes << '\n'
     << "dt = " << format_double(s.dt) << '\n'
     << "tsteps = " << s.steps << '\n'
     << "snapshot_stride = " << s.snapshot_stride << '\n'
     << "seeds = " << s.seed_count << '\n';
  if (s.seed_window)
    os << "seed_lo = " << format_double(s.seed_window->lo) << '\n'
       << "seed_hi = " << format_double(s.seed_window->hi) << '\n';
  os << "density_stride = " << s.density_stride << '\n'
     << "measure_samples = " << s.measure_samples << '\n'
     << "audit_doubling = " << (s.audit_doubling ? "true" : "false") << '\n'
     << "outputs = " << outputs_text(s.outputs) << '\n';
  return os.str();
}

}  // namespace scl
