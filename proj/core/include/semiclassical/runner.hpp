#pragma once

// Scenario runs: co-evolution of field, Bohmian and classical trajectories,
// CSV export, built-in audits and run summaries.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiclassical/classical_flow.hpp"
#include "semiclassical/scenario.hpp"
#include "semiclassical/trajectories.hpp"

namespace scl {

struct AuditResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double value = 0.0;
  double limit = 0.0;
};

struct RunOptions {
  unsigned threads = 1;
  /// Progress and audit lines; silent when null.
  std::ostream* log = nullptr;
  /// Write nothing to disk (the report still carries every result).
  bool dry_run = false;
};

struct RunReport {
  ScenarioSpec spec;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
  SeedSet seeds;
  TrajectoryBundle bohmian;
  TrajectoryBundle classical;
  CausticReport caustic;
  /// Relative drifts max_t |Q(t) - Q(0)| / |Q(0)|.
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  /// Deviation fractions (delta = 0.05) before and after the caustic onset;
  /// empty when the window does not fit the run.
  std::optional<Window> pre_window;
  std::optional<Window> post_window;
  std::optional<double> deviation_pre;
  std::optional<double> deviation_post;
  std::optional<double> doubling_difference;
  std::vector<AuditResult> audits;
  double runtime_seconds = 0.0;

  bool passed() const;
};

inline constexpr double kDeviationDelta = 0.05;
inline constexpr double kEnergyDriftLimit = 1e-7;
inline constexpr double kMassDriftLimit = 1e-10;
inline constexpr double kDoublingLimit = 1e-4;

/// Deviation windows [0, min(t_end, 0.75 T*)] and [1.5 T*, 2.5 T*].
std::optional<Window> pre_caustic_window(double t_star, double t_end);
std::optional<Window> post_caustic_window(double t_star, double t_end);

/// Seeds of a spec: equispaced over spec.seed_window or the 1e-3 support of |a0|.
SeedSet scenario_seeds(const ScenarioSpec& spec);

/// Runs one scenario and writes its files into `out_dir` (created if needed).
RunReport run_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir, const RunOptions& opts = {});

/// One run per epsilon in out_dir/eps_<epsilon>.
std::vector<RunReport> sweep(const ScenarioSpec& base, const std::vector<double>& epsilons,
                             const std::filesystem::path& out_dir, const RunOptions& opts = {});

/// key=value summary of a finished run (summary.txt in the run directory).
struct RunSummary {
  std::filesystem::path dir;
  std::map<std::string, std::string> values;

  std::string get(const std::string& key) const;
  /// NaN when missing or not numeric.
  double number(const std::string& key) const;
};

void write_summary(const RunReport& report, const std::filesystem::path& path);
RunSummary read_summary(const std::filesystem::path& path);

/// Summaries found in `dir` itself or in its immediate subdirectories, sorted by path.
std::vector<RunSummary> collect_runs(const std::filesystem::path& dir);

/// Text table of the runs; throws InvalidArgument when `runs` is empty.
std::string summary_report(const std::vector<RunSummary>& runs);

}  // namespace scl
