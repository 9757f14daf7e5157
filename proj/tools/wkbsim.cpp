#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "semiclassical/error.hpp"
#include "semiclassical/runner.hpp"
#include "semiclassical/scenario.hpp"

namespace {

enum Exit { ok = 0, audit_failed = 2, config_error = 3, numerical_abort = 4 };

unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WKBSIM_THREADS")) {
    unsigned cap = 0;
    const std::string s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || cap == 0)
      throw scl::ConfigError("WKBSIM_THREADS must be a positive integer");
    n = std::min(n, cap);
  }
  return n;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc{} || r.ptr != item.data() + item.size())
      throw scl::ConfigError("bad number in epsilon list: '" + std::string(item) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty()) throw scl::ConfigError("empty epsilon list");
  return out;
}

struct RunFlags {
  std::string scenario, epsilon, modes, tsteps, dt, seeds, config;
  std::string out = "out";
};

scl::ScenarioSpec resolve(const RunFlags& f) {
  scl::ConfigMap base;
  if (!f.config.empty()) base = scl::parse_config_file(f.config);
  scl::ConfigMap flags;
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) flags[key] = {v, 0};
  };
  put("scenario", f.scenario);
  put("epsilon", f.epsilon);
  put("modes", f.modes);
  put("tsteps", f.tsteps);
  put("dt", f.dt);
  put("seeds", f.seeds);
  return scl::resolve_spec(base, flags);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Schroedinger runs: spectral solver, Bohmian and classical trajectories"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its CSV files");
  run_cmd->add_option("--scenario", run.scenario, "vortex|wavepacket|harmonic_focus|free_caustic|free_plane|rarefaction");
  run_cmd->add_option("--epsilon", run.epsilon, "Semiclassical parameter in (0, 1]");
  run_cmd->add_option("--modes", run.modes, "Fourier modes (power of two)");
  run_cmd->add_option("--tsteps", run.tsteps, "Number of time steps");
  run_cmd->add_option("--dt", run.dt, "Time step");
  run_cmd->add_option("--seeds", run.seeds, "Number of trajectories");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--config", run.config, "key=value configuration file (flags take precedence)");

  RunFlags sw;
  std::string eps_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario for several epsilon values");
  sweep_cmd->add_option("--scenario", sw.scenario)->required();
  sweep_cmd->add_option("--epsilon-list", eps_list, "Comma separated, e.g. 1e-1,1e-2,1e-3")->required();
  sweep_cmd->add_option("--out", sw.out, "Output directory (one subdirectory per epsilon)");
  sweep_cmd->add_option("--config", sw.config);

  std::string report_in;
  auto* report_cmd = app.add_subcommand("report", "Summarise finished runs");
  report_cmd->add_option("--in", report_in, "Run directory or directory of runs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    scl::RunOptions opts;
    opts.log = &std::cerr;
    if (*run_cmd) {
      opts.threads = thread_count();
      const scl::ScenarioSpec spec = resolve(run);
      const scl::RunReport rep = scl::run_scenario(spec, run.out, opts);
      for (const auto& a : rep.audits)
        std::cout << (a.skipped ? "SKIP " : a.passed ? "PASS " : "FAIL ") << a.name << '\n';
      return rep.passed() ? ok : audit_failed;
    }
    if (*sweep_cmd) {
      opts.threads = thread_count();
      const scl::ScenarioSpec base = resolve(sw);
      std::vector<double> eps = parse_list(eps_list);
      for (double e : eps)
        if (!(e > 0.0 && e <= 1.0)) throw scl::ConfigError("epsilon must lie in (0, 1]");
      const auto reports = scl::sweep(base, eps, sw.out, opts);
      std::cout << scl::summary_report(scl::collect_runs(sw.out));
      for (const auto& r : reports)
        if (!r.passed()) return audit_failed;
      return ok;
    }
    if (*report_cmd) {
      const auto runs = scl::collect_runs(report_in);
      if (runs.empty()) throw scl::ConfigError("no runs found in " + report_in);
      std::cout << scl::summary_report(runs);
      return ok;
    }
  } catch (const scl::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const scl::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const scl::Error& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return numerical_abort;
  }
  return ok;
}
