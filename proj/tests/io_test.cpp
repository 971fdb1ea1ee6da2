#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <regex>

#include "kropina/experiments.hpp"
#include "kropina/io.hpp"

using namespace kropina;

namespace {

constexpr double pi = std::numbers::pi;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::evaluation;  // sentinel: nothing thrown
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("kropina_io_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(ParseReal, PiExpressions) {
  EXPECT_DOUBLE_EQ(io::parse_real("pi/8"), pi / 8);
  EXPECT_DOUBLE_EQ(io::parse_real("-3*pi/4"), -3 * pi / 4);
  EXPECT_DOUBLE_EQ(io::parse_real("2.5e-3"), 2.5e-3);
  EXPECT_DOUBLE_EQ(io::parse_real(" pi "), pi);
  EXPECT_EQ(kind_of([] { io::parse_real("pie"); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { io::parse_real(""); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { io::parse_real("1/0"); }), ErrorKind::usage);
}

TEST(ParseLists, RealsPointsBools) {
  const auto r = io::parse_real_list("1, 2,pi");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[2], pi);
  const auto p = io::parse_point_list("1 2; -0.5 3");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1][0], -0.5);
  EXPECT_EQ(p[1][1], 3.0);
  EXPECT_TRUE(io::parse_bool("yes"));
  EXPECT_FALSE(io::parse_bool("false"));
  EXPECT_EQ(kind_of([] { io::parse_bool("maybe"); }), ErrorKind::usage);
  EXPECT_EQ(kind_of([] { io::parse_point_list("1 2 3"); }), ErrorKind::usage);
}

TEST(Config, ParsesSectionsAndComments) {
  const auto doc = io::parse_config("# header\n; note\n[run]\ndphi = pi/18 # trailing\n\n[output]\nsvg=true\n", "a.ini");
  const auto* e = doc.find("run", "dphi");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->line, 4);
  EXPECT_DOUBLE_EQ(io::parse_real(e->value), pi / 18);
  EXPECT_EQ(doc.find("run", "svg"), nullptr);
}

TEST(Config, DiagnosticsCarryLineNumbers) {
  EXPECT_NE(message_of([] { io::parse_config("[run\n", "a.ini"); }).find("a.ini:1"), std::string::npos);
  EXPECT_NE(message_of([] { io::parse_config("x = 1\n", "a.ini"); }).find("a.ini:1"), std::string::npos);
  EXPECT_NE(message_of([] { io::parse_config("[run]\nx = 1\nx = 2\n", "a.ini"); }).find("a.ini:3"),
            std::string::npos);
  EXPECT_NE(message_of([] { io::parse_config("[run]\njunk\n", "a.ini"); }).find("a.ini:2"), std::string::npos);
}

TEST(Config, UnknownKeyRejectedWithLine) {
  RunConfig c;
  const auto doc = io::parse_config("[run]\ndphi = pi/8\nphi_zero = 1\n", "b.ini");
  const auto msg = message_of([&] { apply_config(doc, c); });
  EXPECT_NE(msg.find("b.ini:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("phi_zero"), std::string::npos);
  const auto bad_value = io::parse_config("[integrator]\nrel_tol = tiny\n", "c.ini");
  EXPECT_NE(message_of([&] { apply_config(bad_value, c); }).find("c.ini:2"), std::string::npos);
  const auto bad_section = io::parse_config("[plot]\nx = 1\n", "d.ini");
  EXPECT_EQ(kind_of([&] { apply_config(bad_section, c); }), ErrorKind::usage);
}

TEST(Config, ResolvedTextRoundTrips) {
  RunConfig c;
  c.experiment = Experiment::isochrone;
  c.times = {0.5, 1.5};
  c.targets = {{{1.0, 2.0}}, {{-0.25, 0.125}}};
  c.velocity = Vec<double, 2>{1.5, 0.25};
  c.integrator.rel_tol = 1e-11;
  const auto r = resolve(c);
  RunConfig back;
  back.experiment = Experiment::isochrone;
  apply_config(io::parse_config(to_config_text(r), "resolved.ini"), back);
  EXPECT_EQ(to_config_text(resolve(back)), to_config_text(r));
  EXPECT_DOUBLE_EQ(*r.dphi, pi / 180);
  EXPECT_EQ(*r.t_end, 1.5);
}

TEST(Config, ResolveDefaultsPerExperiment) {
  RunConfig c;
  c.experiment = Experiment::reachable;
  auto r = resolve(c);
  EXPECT_DOUBLE_EQ(*r.dphi, pi / 180);
  EXPECT_EQ(*r.t_end, 50.0);
  std::vector<std::string> warnings;
  c.full_scale = true;
  r = resolve(c, &warnings);
  EXPECT_DOUBLE_EQ(*r.dphi, pi / 720);
  EXPECT_EQ(*r.t_end, 500.0);
  EXPECT_EQ(*r.count, 1440u);
  EXPECT_EQ(warnings.size(), 1u);
  c = RunConfig{};
  c.dphi = -1.0;
  EXPECT_EQ(kind_of([&] { resolve(c); }), ErrorKind::usage);
}

TEST(TrajectoryCsv, RoundTripAndRowCount) {
  // Constant wind |W~| = |u| = 1: one ray to t = 5 has 501 rows.
  const auto sc = constant_wind_scenario(1.0);
  FanSpec spec;
  spec.count = 1;
  spec.t_end = 5.0;
  spec.metric = ExampleMetric::generalized;
  const auto fan = generate_fan(sc, spec, IntegratorConfig{});
  const auto rows = io::trajectory_rows(fan);
  ASSERT_EQ(rows.size(), 501u);
  const auto text = io::format_trajectory_csv(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), io::kTrajectoryHeader);
  const auto back = io::parse_trajectory_csv(text);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].ray_id, rows[i].ray_id);
    EXPECT_EQ(back[i].t, rows[i].t);
    EXPECT_EQ(back[i].x, rows[i].x);
    EXPECT_EQ(back[i].vy, rows[i].vy);
    EXPECT_EQ(back[i].f_value, rows[i].f_value);
  }
  EXPECT_NEAR(back.back().x, 10.0, 1e-12);
}

TEST(TrajectoryCsv, StrictParsing) {
  EXPECT_EQ(kind_of([] { io::parse_trajectory_csv("ray_id,t\n"); }), ErrorKind::data);
  const std::string h(io::kTrajectoryHeader);
  EXPECT_EQ(kind_of([&] { io::parse_trajectory_csv(h + "\n0,0,0,1,2\n"); }), ErrorKind::data);
  EXPECT_EQ(kind_of([&] { io::parse_trajectory_csv(h + "\n0,0,0,x,0,0,0,0,0\n"); }), ErrorKind::data);
}

TEST(ComparisonCsv, CompleteRowsOnly) {
  ComparisonRow ok;
  ok.target = {{1.0, 2.0}};
  ok.original = ShootingResult{};
  ok.original->phi0 = 0.1;
  ok.original->travel_time = 2.0;
  ok.generalized = ShootingResult{};
  ok.generalized->phi0 = 0.2;
  ok.generalized->travel_time = 3.0;
  ComparisonRow missing;
  missing.target = {{-1.0, 0.0}};
  missing.excluded_reason = "no heading reaches the target";
  const auto csv = io::format_comparison_csv({ok, missing});
  EXPECT_EQ(csv, std::string(io::kComparisonHeader) + "\n1,2,0.10000000000000001,2,0.20000000000000001,3,1\n");
  const auto ex = io::format_excluded_csv({ok, missing});
  EXPECT_NE(ex.find("-1,0,"), std::string::npos);
  EXPECT_EQ(ex.find("1,2,"), std::string::npos);
}

TEST(Svg, EmptyPlotIsValidCanvas) {
  const auto svg = io::render_svg(io::PlotSpec{});
  EXPECT_NE(svg.find("<svg "), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Svg, SeriesColorsAndIsochroneDashes) {
  io::PlotSpec p;
  io::PlotSeries a;
  a.style = io::SeriesStyle::generalized;
  a.lines = {{{0.0, 0.0}, {1.0, 1.0}}};
  p.series.push_back(a);
  for (double t : {1.0, 2.0, 3.0}) {
    io::PlotIsochrone iso;
    iso.t = t;
    iso.points = {{0.0, 0.0}, {t, 0.0}, {0.0, t}};
    p.isochrones.push_back(iso);
  }
  const auto svg = io::render_svg(p);
  EXPECT_NE(svg.find("#d62728"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray=\"7 3 1.5 3\""), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray=\"7 4\""), std::string::npos);
  EXPECT_EQ(io::isochrone_dash(2.0), "");
}

TEST(Svg, PolylineCoordinatesRecoverable) {
  // Pixel coordinates map back to chart coordinates within a pixel.
  io::PlotSpec p;
  p.bounds = std::array<double, 4>{-1.0, 1.0, -1.0, 1.0};
  io::PlotSeries s;
  s.lines = {{{-0.5, 0.25}, {0.75, -0.5}}};
  p.series.push_back(s);
  const auto svg = io::render_svg(p);
  const std::regex poly("<polyline points=\"([-0-9.]+),([-0-9.]+) ([-0-9.]+),([-0-9.]+)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, poly));
  const double x0 = std::stod(m[1]), y0 = std::stod(m[2]), x1 = std::stod(m[3]), y1 = std::stod(m[4]);
  // Slope in pixel space mirrors the chart slope with y flipped.
  EXPECT_NEAR((y1 - y0) / (x1 - x0), -(-0.75 / 1.25), 1e-3);
}

TEST(Experiments, GeodesicWritesCsvAndSvg) {
  const auto dir = scratch_dir("geodesic");
  RunConfig c;
  c.experiment = Experiment::geodesic;
  c.t_end = 2.0;
  c.svg = true;
  const auto sum = run_experiment(resolve(c), dir);
  EXPECT_FALSE(sum.numerical_failure);
  ASSERT_EQ(sum.outputs.size(), 3u);
  const auto rows = io::parse_trajectory_csv(io::read_text(dir / "trajectories_generalized.csv"));
  EXPECT_EQ(rows.size(), 201u);
  EXPECT_TRUE(std::filesystem::exists(dir / "geodesic.svg"));
  std::filesystem::remove_all(dir);
}

TEST(Experiments, ExcludedHeadingSurfaces) {
  RunConfig c;
  c.experiment = Experiment::geodesic;
  c.phi0 = pi;
  c.t_end = 1.0;
  EXPECT_EQ(kind_of([&] { run_experiment(resolve(c), scratch_dir("excluded")); }), ErrorKind::excluded_heading);
}

TEST(Experiments, EvalReportsInitialVelocity) {
  const auto dir = scratch_dir("eval");
  RunConfig c;
  c.experiment = Experiment::eval;
  c.metric = MetricChoice::generalized;
  run_experiment(resolve(c), dir);
  const auto text = io::read_text(dir / "eval.csv");
  EXPECT_NE(text.find("generalized,0,0,2,0,1,"), std::string::npos) << text;
  std::filesystem::remove_all(dir);
}
