#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "semiclassical/csv.hpp"
#include "semiclassical/error.hpp"
#include "semiclassical/runner.hpp"
#include "semiclassical/scenario.hpp"

using namespace scl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("semiclassical_test_" + name);
  fs::remove_all(p);
  return p;
}

int config_error_line(std::string_view text) {
  try {
    resolve_spec(parse_config_text(text));
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioSpec small_caustic_spec() {
  ScenarioSpec s = catalog_spec(ScenarioName::free_caustic);
  s.epsilon = 1e-2;
  s.modes = 1024;
  s.steps = 600;
  s.dt = 1e-3;
  s.snapshot_stride = 50;
  s.seed_count = 11;
  s.measure_samples = 2000;
  s.density_stride = 16;
  return s;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("catalog entries are valid and named") {
    for (ScenarioName n : all_scenarios()) {
      const ScenarioSpec s = catalog_spec(n);
      CHECK_NOTHROW(s.validate());
      CHECK(scenario_from_string(to_string(n)) == n);
      CHECK(s.steps == 10'000);
      CHECK(boundary_decay(init_state(s.grid(), s.initial_data(), s.epsilon), 1e-12));
    }
    CHECK(catalog_spec(ScenarioName::free_caustic).t_end() == doctest::Approx(0.6));
    CHECK(catalog_spec(ScenarioName::harmonic_focus).t_end() == doctest::Approx(3.141592653589793));
    CHECK_THROWS_AS(scenario_from_string("nope"), ConfigError);
  }

  TEST_CASE("config parsing and resolution") {
    const ScenarioSpec s = resolve_spec(parse_config_text(
        "# comment\nscenario = harmonic_focus\n\nepsilon = 1e-2   # trailing\ntsteps = 1e3\nt_end = 0.5\n"));
    CHECK(s.name == ScenarioName::harmonic_focus);
    CHECK(s.epsilon == 1e-2);
    CHECK(s.steps == 1000);
    CHECK(s.dt == doctest::Approx(5e-4));
    CHECK(s.snapshot_stride == 10);

    ConfigMap flags{{"epsilon", {"0.1", 0}}, {"dt", {"1e-3", 0}}};
    const ScenarioSpec o = resolve_spec(parse_config_text("scenario = free_plane\nepsilon = 0.5\n"), flags);
    CHECK(o.epsilon == 0.1);
    CHECK(o.steps == 1000);
    CHECK(o.t_end() == doctest::Approx(1.0));

    const ScenarioSpec w = resolve_spec(parse_config_text("scenario = free_caustic\nseed_lo = 0.2\nseed_hi = 0.8\noutputs = density, caustic\n"));
    REQUIRE(w.seed_window.has_value());
    CHECK(w.seed_window->lo == 0.2);
    CHECK(w.outputs.density);
    CHECK_FALSE(w.outputs.trajectories);
  }

  TEST_CASE("config errors carry line numbers") {
    CHECK(config_error_line("scenario = vortex\nbogus = 1\n") == 2);
    CHECK(config_error_line("scenario = vortex\nepsilon = 0.1\nepsilon = 0.2\n") == 3);
    CHECK(config_error_line("scenario = vortex\n\nepsilon = 2\n") == 3);
    CHECK(config_error_line("scenario = vortex\nmodes = 100\n") == 0);
    CHECK(config_error_line("scenario = vortex\nmodes = 1.5\n") == 2);
    CHECK(config_error_line("scenario = vortex\njust words\n") == 2);
    CHECK(config_error_line("\nscenario = atlantis\n") == 2);
    CHECK(config_error_line("scenario = vortex\nt_end = 1\ndt = 0.1\ntsteps = 10\n") == 2);
    CHECK(config_error_line("scenario = vortex\nseed_lo = 0.1\n") == 2);
    CHECK(config_error_line("scenario = vortex\noutputs = density,plots\n") == 2);
    CHECK(config_error_line("epsilon = 0.1\n") == 0);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.txt"), ConfigError);
  }

  TEST_CASE("config text round trip") {
    for (ScenarioName n : all_scenarios()) {
      ScenarioSpec s = catalog_spec(n);
      s.seed_window = Window{0.25, 0.75};
      s.outputs.measures = false;
      const ScenarioSpec back = resolve_spec(parse_config_text(to_config_text(s)));
      CHECK(to_config_text(back) == to_config_text(s));
      CHECK(back.dt == s.dt);
      CHECK(back.steps == s.steps);
    }
  }

  TEST_CASE("CSV numbers round trip exactly") {
    const fs::path dir = scratch_dir("csv");
    fs::create_directories(dir);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> vals;
    for (int i = 0; i < 200; ++i) vals.push_back(u(rng) * std::pow(10.0, i % 30 - 15));
    vals.push_back(std::numeric_limits<double>::quiet_NaN());
    vals.push_back(-std::numeric_limits<double>::infinity());
    vals.push_back(std::numeric_limits<double>::denorm_min());
    {
      CsvWriter w(dir / "a.csv", {"i", "v", "s"});
      for (std::size_t i = 0; i < vals.size(); ++i) w.row({static_cast<std::int64_t>(i), vals[i], std::string("x")});
      CHECK(w.rows() == vals.size());
      CHECK_THROWS_AS(w.row({1.0}), InvalidArgument);
    }
    const CsvTable t = read_csv(dir / "a.csv");
    CHECK(t.header == std::vector<std::string>{"i", "v", "s"});
    const auto back = t.numbers("v");
    REQUIRE(back.size() == vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (std::isnan(vals[i]))
        CHECK(std::isnan(back[i]));
      else
        CHECK(back[i] == vals[i]);
    }
    CHECK_THROWS_AS(t.numbers("s"), InvalidArgument);
    CHECK_THROWS_AS(t.column_index("zzz"), InvalidArgument);
    std::ofstream(dir / "ragged.csv") << "a,b\n1\n";
    CHECK_THROWS_AS(read_csv(dir / "ragged.csv"), InvalidArgument);
    fs::remove_all(dir);
  }

  TEST_CASE("scenario run writes self-describing, deterministic output") {
    const ScenarioSpec spec = small_caustic_spec();
    const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
    const RunReport ra = run_scenario(spec, a);
    const RunReport rb = run_scenario(spec, b);
    CHECK(ra.passed());
    CHECK(ra.caustic.t_star == doctest::Approx(0.2).epsilon(1e-6));
    REQUIRE(ra.deviation_pre.has_value());
    REQUIRE(ra.deviation_post.has_value());
    CHECK(ra.doubling_difference.value() < 1e-4);
    for (const char* name : {"trajectories.csv", "classical.csv", "density.csv", "conservation.csv", "branches.csv",
                             "measures.csv"}) {
      INFO(name);
      REQUIRE(fs::exists(a / name));
      CHECK(slurp(a / name) == slurp(b / name));
      const CsvTable t = read_csv(a / name);
      CHECK_FALSE(t.rows.empty());
    }
    const CsvTable traj = read_csv(a / "trajectories.csv");
    CHECK(traj.rows.size() == ra.bohmian.seed_count() * ra.bohmian.time_count());
    const auto xs = traj.numbers("X");
    CHECK(xs[5] == ra.bohmian.x_at(5, 0));
    CHECK(xs[ra.bohmian.seed_count() + 2] == ra.bohmian.x_at(2, 1));
    const CsvTable br = read_csv(a / "branches.csv");
    const auto js = br.numbers("j");
    CHECK(*std::max_element(js.begin(), js.end()) == 2.0);
    CHECK(slurp(a / "caustic.txt").rfind("T* = 0.2", 0) == 0);

    const RunSummary sum = read_summary(a / "summary.txt");
    CHECK(sum.get("scenario") == "free_caustic");
    CHECK(sum.number("epsilon") == 1e-2);
    CHECK(sum.get("audit_mass_drift") == "PASS");
    const ScenarioSpec again = resolve_spec(parse_config_file(a / "config.txt"));
    CHECK(to_config_text(again) == to_config_text(spec));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("sweep and report") {
    ScenarioSpec spec = small_caustic_spec();
    spec.audit_doubling = false;
    spec.outputs = OutputFlags{false, false, false, false, false, false, false};
    const fs::path dir = scratch_dir("sweep");
    const auto reps = sweep(spec, {1e-1, 5e-2}, dir);
    REQUIRE(reps.size() == 2);
    const auto runs = collect_runs(dir);
    REQUIRE(runs.size() == 2);
    const std::string report = summary_report(runs);
    CHECK(report.find("free_caustic") != std::string::npos);
    CHECK(report.find("pre-caustic deviation") != std::string::npos);
    CHECK_THROWS_AS(summary_report({}), InvalidArgument);
    CHECK_THROWS_AS(sweep(spec, {}, dir), InvalidArgument);
    fs::remove_all(dir);
  }

  TEST_CASE("deviation windows") {
    const auto pre = pre_caustic_window(0.2, 0.6);
    REQUIRE(pre.has_value());
    CHECK(pre->hi == doctest::Approx(0.15));
    const auto post = post_caustic_window(0.2, 0.6);
    REQUIRE(post.has_value());
    CHECK(post->lo == doctest::Approx(0.3));
    CHECK(post->hi == doctest::Approx(0.5));
    CHECK_FALSE(post_caustic_window(0.2, 0.4).has_value());
    CHECK_FALSE(post_caustic_window(std::numeric_limits<double>::infinity(), 1.0).has_value());
    CHECK(pre_caustic_window(std::numeric_limits<double>::infinity(), 1.0)->hi == 1.0);
  }
}
