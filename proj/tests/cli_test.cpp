#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kropina/cli.hpp"

using namespace kropina;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "kropina");
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("kropina_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_path(const std::string& name) { return std::string(KROPINA_CONFIG_DIR) + "/" + name; }

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(io::read_text(dir / "manifest.json")); }

}  // namespace

TEST(Cli, FanWithFigureTwoParameters) {
  const auto dir = scratch("fan");
  const auto r = run_cli({"fan", "--dphi", "pi/8", "--t-end", "10", "--svg", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const std::string m : {"original", "generalized"}) {
    const auto rows = io::parse_trajectory_csv(io::read_text(dir / ("trajectories_" + m + ".csv")));
    std::map<std::size_t, std::pair<double, double>> f_range;
    for (const auto& row : rows) {
      auto [it, fresh] = f_range.try_emplace(row.ray_id, row.f_value, row.f_value);
      it->second.first = std::min(it->second.first, row.f_value);
      it->second.second = std::max(it->second.second, row.f_value);
    }
    EXPECT_EQ(f_range.size(), 15u) << m;
    for (const auto& [id, fr] : f_range) EXPECT_LE(fr.second - fr.first, 1e-6) << m << " ray " << id;
  }
  EXPECT_TRUE(fs::exists(dir / "fan.svg"));
  const auto man = manifest(dir);
  EXPECT_EQ(man["status"], "ok");
  EXPECT_EQ(man["exit_code"], 0);
  EXPECT_EQ(man["details"]["generalized"]["rays"], 15);
  EXPECT_TRUE(fs::exists(dir / "resolved.ini"));
}

TEST(Cli, ResolvedConfigReproducesRun) {
  const auto a = scratch("resolved_a"), b = scratch("resolved_b");
  ASSERT_EQ(run_cli({"fan", "--dphi", "pi/4", "--t-end", "2", "--metric", "generalized", "--out", a.string()}).code, 0);
  ASSERT_EQ(run_cli({"fan", "--config", (a / "resolved.ini").string(), "--out", b.string()}).code, 0);
  EXPECT_EQ(io::read_text(a / "trajectories_generalized.csv"), io::read_text(b / "trajectories_generalized.csv"));
  EXPECT_EQ(io::read_text(a / "resolved.ini"), io::read_text(b / "resolved.ini"));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b})
    ASSERT_EQ(run_cli({"isochrone", "--dphi", "pi/36", "--svg", "--out", d.string()}).code, 0);
  for (const std::string f : {"isochrones_original.csv", "isochrones_generalized.csv", "isochrones.svg"})
    EXPECT_EQ(io::read_text(a / f), io::read_text(b / f)) << f;
}

TEST(Cli, CsvReingestedGivesSameSvg) {
  const auto dir = scratch("reingest");
  ASSERT_EQ(run_cli({"fan", "--dphi", "pi/8", "--t-end", "4", "--svg", "--out", dir.string()}).code, 0);
  RunConfig c;
  c.experiment = Experiment::fan;
  io::PlotSpec plot;
  plot.title = "fan";
  kropina::detail::add_winds(plot, c, example_scenario());
  for (const std::string m : {"original", "generalized"}) {
    const auto rows = io::parse_trajectory_csv(io::read_text(dir / ("trajectories_" + m + ".csv")));
    plot.series.push_back(io::series_from_rows(rows, m == "original" ? io::SeriesStyle::original
                                                                     : io::SeriesStyle::generalized));
  }
  EXPECT_EQ(io::render_svg(plot), io::read_text(dir / "fan.svg"));
}

TEST(Cli, ShippedFigureConfigsMatchBuiltinParameterSets) {
  for (const auto& fig : figure_runs()) {
    std::vector<std::string> warnings;
    cli::Overrides o;
    o.config = config_path(fig.id + ".ini");
    const auto from_file = cli::detail::build_config(fig.config.experiment, o, warnings);
    EXPECT_EQ(to_config_text(from_file), to_config_text(resolve(fig.config))) << fig.id;
  }
}

TEST(Cli, CompareConfigWritesTable) {
  const auto dir = scratch("compare");
  const auto r = run_cli({"compare", "--config", config_path("compare.ini"), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = io::read_text(dir / "comparison.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), io::kComparisonHeader);
  const auto man = manifest(dir);
  EXPECT_EQ(man["details"]["targets"], 8);
  EXPECT_EQ(man["details"]["complete"], man["details"]["generalized_not_faster"]);
  EXPECT_GE(man["details"]["complete"].get<int>(), 6);
}

TEST(Cli, HalfSpeedConfigDoublesTimes) {
  const auto dir = scratch("half");
  ASSERT_EQ(run_cli({"compare", "--config", config_path("compare_half_speed.ini"), "--out", dir.string()}).code, 0);
  std::istringstream in(io::read_text(dir / "comparison.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c = io::detail::split_csv_line(line);
    EXPECT_NEAR(std::stod(c[5]) / std::stod(c[3]), 2.0, 1e-4);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, UnknownConfigKeyExitsOneWithLine) {
  const auto dir = scratch("badkey");
  std::ofstream(dir / "bad.ini") << "[run]\ndphi = pi/8\nstep = 3\n";
  const auto r = run_cli({"fan", "--config", (dir / "bad.ini").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.ini:3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("step"), std::string::npos);
  EXPECT_EQ(manifest(dir)["status"], "error");
}

TEST(Cli, ExperimentMismatchRejected) {
  const auto dir = scratch("mismatch");
  const auto r = run_cli({"fan", "--config", config_path("fig4_left.ini"), "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("fig4_left.ini:3"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitOne) {
  const auto dir = scratch("usage");
  EXPECT_EQ(run_cli({"fan", "--dphi", "wide", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"fan", "--metric", "both-ish", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"fan", "--config", (dir / "missing.ini").string(), "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"fan", "--bogus"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"fan", "--help"}).code, 0);
  const auto v = run_cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(kToolVersion), std::string::npos);
}

TEST(Cli, ExcludedHeadingExitsOne) {
  const auto dir = scratch("excluded");
  const auto r = run_cli({"geodesic", "--phi0", "pi", "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("excluded-heading"), std::string::npos);
  EXPECT_EQ(manifest(dir)["error_kind"], "excluded-heading");
}

TEST(Cli, NumericalFailureExitsTwoWithPartialOutputs) {
  const auto dir = scratch("numfail");
  std::ofstream(dir / "tight.ini") << "[integrator]\nmax_steps = 3\n";
  const auto r = run_cli({"geodesic", "--config", (dir / "tight.ini").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(dir / "trajectories_generalized.csv"));
  const auto man = manifest(dir);
  EXPECT_EQ(man["status"], "numerical-failure");
  EXPECT_EQ(man["exit_code"], 2);
}

TEST(Cli, UnwritableOutputExitsTwo) {
  const auto dir = scratch("io");
  std::ofstream(dir / "file") << "x";
  const auto r = run_cli({"geodesic", "--t-end", "1", "--out", (dir / "file" / "sub").string()});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, FullScaleReachableWarns) {
  std::vector<std::string> warnings;
  cli::Overrides o;
  o.config = config_path("fig4_right_full.ini");
  const auto c = cli::detail::build_config(Experiment::reachable, o, warnings);
  EXPECT_EQ(*c.count, 1440u);
  EXPECT_EQ(*c.t_end, 500.0);
  ASSERT_EQ(warnings.size(), 1u);
}

TEST(Cli, EvalWindFieldSvg) {
  const auto dir = scratch("eval");
  ASSERT_EQ(run_cli({"eval", "--config", config_path("fig1.ini"), "--out", dir.string()}).code, 0);
  const auto svg = io::read_text(dir / "fig1_wind_field.svg");
  EXPECT_NE(svg.find("fill-opacity"), std::string::npos);
  EXPECT_NE(svg.find("#1f5fbf"), std::string::npos);
}
