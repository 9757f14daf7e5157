#pragma once

// Scenario catalog and flat key=value configuration.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semiclassical/classical_flow.hpp"
#include "semiclassical/profiles.hpp"
#include "semiclassical/solver.hpp"
#include "semiclassical/spectral.hpp"

namespace scl {

enum class ScenarioName { vortex, wavepacket, harmonic_focus, free_caustic, free_plane, rarefaction };

std::string_view to_string(ScenarioName name);
/// Throws ConfigError for unknown names.
ScenarioName scenario_from_string(std::string_view name);
std::vector<ScenarioName> all_scenarios();

struct OutputFlags {
  bool trajectories = true;
  bool density = true;
  bool conservation = true;
  bool classical = true;
  bool caustic = true;
  /// branches.csv and measures.csv; only written for V = 0 scenarios.
  bool branches = true;
  bool measures = true;
};

struct ScenarioSpec {
  ScenarioName name = ScenarioName::free_caustic;
  double epsilon = 1e-3;
  double x0 = -2.0;
  double length = 5.0;
  std::size_t modes = 4096;
  double dt = 1e-4;
  std::size_t steps = 10'000;
  std::size_t snapshot_stride = 100;
  std::size_t seed_count = 21;
  /// Seed interval; the 1e-3 support of |a0| when empty.
  std::optional<Window> seed_window;
  /// Every density_stride-th node goes to density.csv.
  std::size_t density_stride = 4;
  /// Torus samples per point in measures.csv.
  std::size_t measure_samples = 100'000;
  /// Re-run the trajectories with half the step and compare.
  bool audit_doubling = true;
  OutputFlags outputs;

  double t_end() const noexcept { return dt * static_cast<double>(steps); }
  Grid grid() const { return Grid(x0, length, modes); }
  WkbInitialData initial_data() const;
  Potential potential() const;
  /// Initial amplitude in physical variables.
  AmplitudeProfile amplitude() const;
  PhaseProfile phase() const;
  ClassicalSystem classical_system() const;
  bool is_free() const { return potential().is_zero(); }
  void validate() const;
};

/// Catalog defaults for a scenario.
ScenarioSpec catalog_spec(ScenarioName name);

struct ConfigEntry {
  std::string value;
  /// Source line; 0 for command-line flags.
  int line = 0;
};
using ConfigMap = std::map<std::string, ConfigEntry>;

/// Parses `key = value` lines; '#' starts a comment. Throws ConfigError with
/// the line number on malformed lines, duplicate or unknown keys.
ConfigMap parse_config_text(std::string_view text);
ConfigMap parse_config_file(const std::filesystem::path& path);

/// Keys understood by resolve_spec.
const std::vector<std::string>& config_keys();

/// Applies `overrides` on top of `base` and resolves the result against the
/// catalog entry named by the `scenario` key.
ScenarioSpec resolve_spec(const ConfigMap& base, const ConfigMap& overrides = {});

/// Flat key=value rendering that resolve_spec reads back to the same spec.
std::string to_config_text(const ScenarioSpec& spec);

}  // namespace scl
