#include "semiclassical/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "semiclassical/bohmian.hpp"
#include "semiclassical/csv.hpp"
#include "semiclassical/error.hpp"
#include "semiclassical/measures.hpp"
#include "semiclassical/solver.hpp"
#include "semiclassical/stationary_phase.hpp"

namespace scl {

namespace {

constexpr std::size_t kBranchPoints = 21;

void log_line(const RunOptions& opts, const std::string& line) {
  if (opts.log) *opts.log << line << '\n' << std::flush;
}

double relative_drift(const std::vector<double>& q) {
  if (q.empty()) return 0.0;
  const double ref = std::max(std::abs(q.front()), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (double v : q) worst = std::max(worst, std::abs(v - q.front()) / ref);
  return worst;
}

// x lattice spanning the classical image of the seeds at snapshot k.
std::vector<double> branch_lattice(const TrajectoryBundle& classical, std::size_t k) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < classical.seed_count(); ++i) {
    lo = std::min(lo, classical.x_at(i, k));
    hi = std::max(hi, classical.x_at(i, k));
  }
  std::vector<double> xs(kBranchPoints);
  for (std::size_t q = 0; q < kBranchPoints; ++q)
    xs[q] = lo + (hi - lo) * static_cast<double>(q) / static_cast<double>(kBranchPoints - 1);
  return xs;
}

void write_trajectories(const std::filesystem::path& path, const TrajectoryBundle& b, bool with_jac) {
  std::vector<std::string> header{"t", "seed_index", "y", "X", "P"};
  if (with_jac) header.emplace_back("jac");
  CsvWriter w(path, header);
  for (std::size_t k = 0; k < b.time_count(); ++k) {
    for (std::size_t i = 0; i < b.seed_count(); ++i) {
      std::vector<CsvWriter::Cell> row{b.times[k], static_cast<std::int64_t>(i), b.seeds[i], b.x_at(i, k),
                                       b.p_at(i, k)};
      if (with_jac) row.emplace_back(b.jac[b.index(i, k)]);
      w.row(row);
    }
  }
}

std::string fmt(double v) { return format_number(v); }

std::string fmt(const std::optional<double>& v) { return v ? format_number(*v) : "nan"; }

}  // namespace

bool RunReport::passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const AuditResult& a) { return a.passed || a.skipped; });
}

std::optional<Window> pre_caustic_window(double t_star, double t_end) {
  const double hi = std::isfinite(t_star) ? std::min(t_end, 0.75 * t_star) : t_end;
  if (!(hi > 0.0)) return std::nullopt;
  return Window{0.0, hi};
}

std::optional<Window> post_caustic_window(double t_star, double t_end) {
  if (!std::isfinite(t_star)) return std::nullopt;
  const Window w{1.5 * t_star, 2.5 * t_star};
  if (w.hi > t_end * (1.0 + 1e-12)) return std::nullopt;
  return w;
}

SeedSet scenario_seeds(const ScenarioSpec& spec) {
  const AmplitudeProfile a0 = spec.amplitude();
  if (spec.seed_window) return SeedSet::uniform(spec.seed_window->lo, spec.seed_window->hi, spec.seed_count, a0);
  return SeedSet::over_support(a0, spec.seed_count);
}

RunReport run_scenario(const ScenarioSpec& spec, const std::filesystem::path& out_dir, const RunOptions& opts) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  RunReport rep;
  rep.spec = spec;
  rep.out_dir = out_dir;
  const bool write = !opts.dry_run;
  if (write) std::filesystem::create_directories(out_dir);
  auto file = [&](const char* name) {
    rep.files.push_back(out_dir / name);
    return rep.files.back();
  };

  const Grid grid = spec.grid();
  const Potential v = spec.potential();
  const Field psi0 = init_state(grid, spec.initial_data(), spec.epsilon);
  if (!boundary_decay(psi0, 1e-12)) log_line(opts, "warning: initial state does not decay at the domain boundary");
  rep.seeds = scenario_seeds(spec);
  log_line(opts, "scenario " + std::string(to_string(spec.name)) + ": eps=" + fmt(spec.epsilon) +
                     " n=" + std::to_string(spec.modes) + " steps=" + std::to_string(spec.steps) +
                     " seeds=" + std::to_string(rep.seeds.size()));

  // Classical rays and caustic onset.
  const ClassicalSystem sys = spec.classical_system();
  rep.classical = classical_bundle(sys, rep.seeds.seeds, spec.steps, spec.snapshot_stride);
  const auto [ylo, yhi] = std::minmax_element(rep.seeds.seeds.begin(), rep.seeds.seeds.end());
  if (*yhi > *ylo) rep.caustic = caustic_onset(sys, {*ylo, *yhi}, {0.0, spec.t_end()});

  // Field and Bohmian trajectories.
  std::optional<CsvWriter> density, conservation;
  if (write && spec.outputs.density) density.emplace(file("density.csv"), std::vector<std::string>{"t", "x", "rho"});
  if (write && spec.outputs.conservation)
    conservation.emplace(file("conservation.csv"),
                         std::vector<std::string>{"t", "mass", "energy", "kinetic_transport", "kinetic_quantum"});
  std::vector<double> masses, energies;
  const SnapshotObserver observer = [&](std::size_t, const Field& f, std::span<const double>,
                                        std::span<const double>) {
    const double m = mass(f);
    const double e = energy(f, v, spec.epsilon);
    masses.push_back(m);
    energies.push_back(e);
    if (conservation) {
      const KineticSplit ks = kinetic_split(f, spec.epsilon);
      conservation->row({f.time(), m, e, ks.transport, ks.quantum});
    }
    if (density)
      for (std::size_t j = 0; j < grid.size(); j += spec.density_stride)
        density->row({f.time(), grid.node(j), std::norm(f[j])});
  };
  BohmianRunConfig cfg{spec.epsilon, spec.dt, spec.steps, spec.snapshot_stride, std::max(1u, opts.threads)};
  rep.bohmian = run_bohmian(psi0, v, cfg, rep.seeds, observer);
  rep.mass_drift = relative_drift(masses);
  rep.energy_drift = relative_drift(energies);
  log_line(opts, "field and trajectories done");

  if (spec.audit_doubling) {
    BohmianRunConfig fine = cfg;
    fine.dt = 0.5 * spec.dt;
    fine.steps = 2 * spec.steps;
    fine.snapshot_stride = 2 * spec.snapshot_stride;
    const TrajectoryBundle refined = run_bohmian(psi0, v, fine, rep.seeds);
    rep.doubling_difference = trajectory_difference(rep.bohmian, refined);
  }

  // Deviation from the classical rays.
  rep.pre_window = pre_caustic_window(rep.caustic.t_star, spec.t_end());
  rep.post_window = post_caustic_window(rep.caustic.t_star, spec.t_end());
  if (rep.pre_window) rep.deviation_pre = deviation_measure(rep.bohmian, rep.classical, kDeviationDelta, *rep.pre_window);
  if (rep.post_window)
    rep.deviation_post = deviation_measure(rep.bohmian, rep.classical, kDeviationDelta, *rep.post_window);

  // Audits.
  const CrossingAudit crossing = non_crossing_audit(rep.bohmian);
  rep.audits.push_back({"non_crossing", crossing.ok, false, crossing.ok ? 0.0 : 1.0, 0.0});
  rep.audits.push_back({"mass_drift", rep.mass_drift <= kMassDriftLimit, false, rep.mass_drift, kMassDriftLimit});
  rep.audits.push_back(
      {"energy_drift", rep.energy_drift <= kEnergyDriftLimit, false, rep.energy_drift, kEnergyDriftLimit});
  if (rep.doubling_difference)
    rep.audits.push_back(
        {"time_step_doubling", *rep.doubling_difference <= kDoublingLimit, false, *rep.doubling_difference, kDoublingLimit});
  else
    rep.audits.push_back({"time_step_doubling", true, true, 0.0, kDoublingLimit});

  if (write) {
    if (spec.outputs.trajectories) write_trajectories(file("trajectories.csv"), rep.bohmian, false);
    if (spec.outputs.classical) write_trajectories(file("classical.csv"), rep.classical, true);
    if (spec.outputs.caustic) {
      std::ofstream out(file("caustic.txt"));
      out << "T* = " << fmt(rep.caustic.t_star) << '\n'
          << "x* = " << fmt(rep.caustic.x_star) << '\n'
          << "y* = " << fmt(rep.caustic.y_star) << '\n';
    }
  }

  // Multi-phase branches and limiting measures (free evolution only).
  if (write && v.is_zero() && (spec.outputs.branches || spec.outputs.measures)) {
    const AmplitudeProfile a0 = spec.amplitude();
    const PhaseProfile s0 = spec.phase();
    std::size_t skipped = 0;
    if (spec.outputs.branches) {
      CsvWriter w(file("branches.csv"), {"t", "x", "j", "Y_j", "S_j", "abs_a_j", "m_minus"});
      for (std::size_t k = 1; k < rep.classical.time_count(); ++k) {
        const double t = rep.classical.times[k];
        for (double x : branch_lattice(rep.classical, k)) {
          try {
            const BranchSet bs = branch_set(t, x, a0, s0);
            for (std::size_t j = 0; j < bs.size(); ++j) {
              const Branch& b = bs.branches[j];
              w.row({t, x, static_cast<std::int64_t>(j), b.y, b.phase, std::abs(b.amplitude),
                     static_cast<std::int64_t>(b.m_minus)});
            }
          } catch (const CausticError&) {
            ++skipped;
          }
        }
      }
    }
    if (spec.outputs.measures) {
      CsvWriter w(file("measures.csv"), {"t", "x", "kind", "p_lo", "p_hi", "mass"});
      const std::size_t k = rep.classical.time_count() - 1;
      const double t = rep.classical.times[k];
      for (double x : branch_lattice(rep.classical, k)) {
        try {
          const BranchSet bs = branch_set(t, x, a0, s0);
          if (bs.size() == 0) continue;
          for (const Atom& a : limiting_wigner_measure(bs)) w.row({t, x, std::string("wigner"), a.p, a.p, a.mass});
          TorusSampling ts;
          ts.samples = spec.measure_samples;
          const MomentumHistogram h = limiting_bohmian_measure(bs, ts);
          for (std::size_t b = 0; b < h.bins(); ++b)
            if (h.masses[b] > 0.0)
              w.row({t, x, std::string("bohmian"), h.bin_edges[b], h.bin_edges[b + 1], h.masses[b]});
        } catch (const CausticError&) {
          ++skipped;
        }
      }
    }
    if (skipped > 0) log_line(opts, std::to_string(skipped) + " branch points skipped near the caustic set");
  }

  for (const AuditResult& a : rep.audits)
    log_line(opts, std::string(a.skipped ? "SKIP" : a.passed ? "PASS" : "FAIL") + " " + a.name + " (" + fmt(a.value) +
                       (a.name == "non_crossing" ? ")" : " <= " + fmt(a.limit) + ")"));

  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (write) {
    write_summary(rep, file("summary.txt"));
    std::ofstream(file("config.txt")) << to_config_text(spec);
  }
  return rep;
}

std::vector<RunReport> sweep(const ScenarioSpec& base, const std::vector<double>& epsilons,
                             const std::filesystem::path& out_dir, const RunOptions& opts) {
  if (epsilons.empty()) throw InvalidArgument("sweep needs at least one epsilon");
  std::vector<RunReport> out;
  for (double eps : epsilons) {
    ScenarioSpec s = base;
    s.epsilon = eps;
    out.push_back(run_scenario(s, out_dir / ("eps_" + format_number(eps)), opts));
  }
  return out;
}

std::string RunSummary::get(const std::string& key) const {
  auto it = values.find(key);
  return it == values.end() ? std::string{} : it->second;
}

double RunSummary::number(const std::string& key) const {
  const std::string s = get(key);
  if (s.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() ? v : std::nan("");
}

void write_summary(const RunReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << "scenario=" << to_string(r.spec.name) << '\n'
      << "epsilon=" << fmt(r.spec.epsilon) << '\n'
      << "modes=" << r.spec.modes << '\n'
      << "tsteps=" << r.spec.steps << '\n'
      << "dt=" << fmt(r.spec.dt) << '\n'
      << "t_end=" << fmt(r.spec.t_end()) << '\n'
      << "seeds=" << r.seeds.size() << '\n'
      << "mass_drift=" << fmt(r.mass_drift) << '\n'
      << "energy_drift=" << fmt(r.energy_drift) << '\n'
      << "t_star=" << fmt(r.caustic.t_star) << '\n'
      << "x_star=" << fmt(r.caustic.x_star) << '\n'
      << "deviation_pre=" << fmt(r.deviation_pre) << '\n'
      << "deviation_post=" << fmt(r.deviation_post) << '\n'
      << "doubling_difference=" << fmt(r.doubling_difference) << '\n';
  for (const AuditResult& a : r.audits)
    out << "audit_" << a.name << '=' << (a.skipped ? "SKIP" : a.passed ? "PASS" : "FAIL") << '\n';
  out << "runtime_seconds=" << std::fixed << std::setprecision(2) << r.runtime_seconds << '\n';
}

RunSummary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  RunSummary s;
  s.dir = path.parent_path();
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    s.values[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return s;
}

std::vector<RunSummary> collect_runs(const std::filesystem::path& dir) {
  std::vector<RunSummary> out;
  if (std::filesystem::is_regular_file(dir / "summary.txt")) out.push_back(read_summary(dir / "summary.txt"));
  if (std::filesystem::is_directory(dir)) {
    std::vector<std::filesystem::path> subdirs;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.is_directory() && std::filesystem::is_regular_file(e.path() / "summary.txt")) subdirs.push_back(e.path());
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& d : subdirs) out.push_back(read_summary(d / "summary.txt"));
  }
  return out;
}

std::string summary_report(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw InvalidArgument("no runs to report");
  std::ostringstream os;
  const std::vector<std::pair<std::string, int>> cols = {
      {"scenario", 16}, {"epsilon", 9},       {"modes", 6},          {"mass_drift", 12}, {"energy_drift", 12},
      {"t_star", 10},   {"deviation_pre", 14}, {"deviation_post", 15}, {"audits", 8}};
  for (const auto& [name, w] : cols) os << std::left << std::setw(w) << name << ' ';
  os << '\n';
  for (const RunSummary& r : runs) {
    bool ok = true;
    for (const auto& [k, v] : r.values)
      if (k.rfind("audit_", 0) == 0 && v == "FAIL") ok = false;
    for (const auto& [name, w] : cols) {
      const std::string cell = name == "audits" ? (ok ? "PASS" : "FAIL") : r.get(name);
      os << std::left << std::setw(w) << (cell.empty() ? "-" : cell) << ' ';
    }
    os << '\n';
  }

  // Deviation trend per scenario across epsilon.
  std::map<std::string, std::vector<std::pair<double, double>>> by_scenario;
  for (const RunSummary& r : runs) by_scenario[r.get("scenario")].push_back({r.number("epsilon"), r.number("deviation_pre")});
  for (auto& [name, pts] : by_scenario) {
    if (pts.size() < 2) continue;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    bool decreasing = true;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i].second < pts[i - 1].second)) decreasing = false;
    os << name << ": pre-caustic deviation";
    for (const auto& [eps, dev] : pts) os << ' ' << format_number(dev) << " (eps=" << format_number(eps) << ')';
    os << (decreasing ? " strictly decreasing" : " not strictly decreasing") << '\n';
  }
  return os.str();
}

}  // namespace scl
