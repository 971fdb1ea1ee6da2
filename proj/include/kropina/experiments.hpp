#pragma once

/// Resolved run parameters and the experiment drivers that turn them into
/// CSV/SVG files. The command-line front end and the acceptance suite both
/// go through run_experiment.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kropina/error.hpp"
#include "kropina/integrator.hpp"
#include "kropina/io.hpp"
#include "kropina/scenario.hpp"
#include "kropina/spray.hpp"

namespace kropina {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum class Experiment { eval, geodesic, fan, isochrone, reachable, compare, verify };
enum class MetricChoice { original, generalized, both };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::eval: return "eval";
    case Experiment::geodesic: return "geodesic";
    case Experiment::fan: return "fan";
    case Experiment::isochrone: return "isochrone";
    case Experiment::reachable: return "reachable";
    case Experiment::compare: return "compare";
    case Experiment::verify: return "verify";
  }
  return "unknown";
}

inline std::string_view to_string(MetricChoice m) {
  switch (m) {
    case MetricChoice::original: return "original";
    case MetricChoice::generalized: return "generalized";
    case MetricChoice::both: return "both";
  }
  return "unknown";
}

inline Experiment parse_experiment(std::string_view s) {
  for (auto e : {Experiment::eval, Experiment::geodesic, Experiment::fan, Experiment::isochrone,
                 Experiment::reachable, Experiment::compare, Experiment::verify})
    if (to_string(e) == s) return e;
  throw Error(ErrorKind::usage, "unknown experiment '" + std::string(s) + "'");
}

inline MetricChoice parse_metric_choice(std::string_view s) {
  for (auto m : {MetricChoice::original, MetricChoice::generalized, MetricChoice::both})
    if (to_string(m) == s) return m;
  throw Error(ErrorKind::usage, "metric must be original, generalized or both, got '" + std::string(s) + "'");
}

/// Every parameter of a run. Optional fields fall back to per-experiment
/// defaults in resolve().
struct RunConfig {
  Experiment experiment = Experiment::fan;

  // [scenario]
  std::string scenario = "example";  // example | constant-wind | constant-speed
  double wind_speed = 1.0;                 // constant-wind: |W~| = |u|
  double ship_speed = 0.5;                 // constant-speed: |u| = c
  double origin_x = 0.0, origin_y = 0.0;

  // [run]
  MetricChoice metric = MetricChoice::both;
  double phi0 = 0.0;
  std::optional<Vec<double, 2>> velocity;  // eval: explicit tangent vector instead of a heading
  double phi_start = 0.0;
  std::optional<double> dphi;
  std::optional<std::size_t> count;
  std::optional<double> t_end;
  std::vector<double> times{1.0, 2.0, 3.0};
  std::vector<ChartPoint<2>> targets;
  std::size_t target_count = 8;
  double target_time = 3.0;
  bool full_scale = false;
  std::size_t cloud_every = 10;

  // [integrator], [shooting]
  IntegratorConfig integrator{};
  ShootingConfig shooting{};

  // [output]
  bool svg = false;
  bool wind_glyphs = true;
  std::string prefix;
};

/// Fills experiment-dependent defaults and validates ranges.
inline RunConfig resolve(RunConfig c, std::vector<std::string>* warnings = nullptr) {
  constexpr double pi = std::numbers::pi;
  switch (c.experiment) {
    case Experiment::reachable:
      // The reachable region is drawn for one metric; "both" means the generalized one.
      if (c.metric == MetricChoice::both) c.metric = MetricChoice::generalized;
      if (c.full_scale) {
        if (!c.dphi) c.dphi = pi / 720.0;
        if (!c.t_end) c.t_end = 500.0;
        if (warnings)
          warnings->push_back("full-scale reachable set: 1440 headings to t = 500, expect a long run and large files");
      }
      if (!c.dphi) c.dphi = pi / 180.0;
      if (!c.t_end) c.t_end = 50.0;
      if (!c.count) c.count = full_turn_count(*c.dphi);
      break;
    case Experiment::isochrone: {
      if (!c.dphi) c.dphi = pi / 180.0;
      double horizon = 0.0;
      for (double t : c.times) horizon = std::max(horizon, t);
      if (!c.t_end) c.t_end = horizon;
      if (!c.count) c.count = full_turn_count(*c.dphi);
      break;
    }
    case Experiment::compare:
      if (!c.dphi) c.dphi = pi / 8.0;
      if (!c.t_end) c.t_end = c.target_time;
      if (!c.count) c.count = full_turn_count(*c.dphi);
      break;
    case Experiment::geodesic:
      if (!c.dphi) c.dphi = pi / 8.0;
      if (!c.t_end) c.t_end = 10.0;
      c.count = 1;
      c.phi_start = c.phi0;
      break;
    default:
      if (!c.dphi) c.dphi = pi / 8.0;
      if (!c.t_end) c.t_end = 10.0;
      if (!c.count) c.count = full_turn_count(*c.dphi);
      break;
  }
  if (!(*c.dphi > 0.0)) throw Error(ErrorKind::usage, "dphi must be positive");
  if (!(*c.t_end > 0.0)) throw Error(ErrorKind::usage, "t_end must be positive");
  if (c.times.empty()) throw Error(ErrorKind::usage, "times must list at least one value");
  for (double t : c.times)
    if (!(t > 0.0)) throw Error(ErrorKind::usage, "isochrone times must be positive");
  if (c.cloud_every == 0) throw Error(ErrorKind::usage, "cloud_every must be at least 1");
  c.integrator.t_end = *c.t_end;
  c.integrator.check();
  if (c.scenario != "example" && c.scenario != "constant-wind" && c.scenario != "constant-speed")
    throw Error(ErrorKind::usage, "unknown scenario '" + c.scenario + "'");
  return c;
}

inline Scenario build_scenario(const RunConfig& c) {
  Scenario sc = c.scenario == "constant-wind"    ? constant_wind_scenario(c.wind_speed)
                : c.scenario == "constant-speed" ? constant_speed_scenario(c.ship_speed)
                                                 : example_scenario();
  sc.origin = {{c.origin_x, c.origin_y}};
  return sc;
}

inline std::vector<ExampleMetric> metrics_of(MetricChoice m) {
  if (m == MetricChoice::original) return {ExampleMetric::original};
  if (m == MetricChoice::generalized) return {ExampleMetric::generalized};
  return {ExampleMetric::original, ExampleMetric::generalized};
}

/// Canonical text of a resolved configuration; parsing it back reproduces the run.
inline std::string to_config_text(const RunConfig& c) {
  using io::fmt17;
  std::string s;
  auto kv = [&s](std::string_view k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += '\n';
  };
  s += "[scenario]\n";
  kv("id", c.scenario);
  kv("wind_speed", fmt17(c.wind_speed));
  kv("ship_speed", fmt17(c.ship_speed));
  kv("origin_x", fmt17(c.origin_x));
  kv("origin_y", fmt17(c.origin_y));
  s += "\n[run]\n";
  kv("experiment", std::string(to_string(c.experiment)));
  kv("metric", std::string(to_string(c.metric)));
  kv("phi0", fmt17(c.phi0));
  if (c.velocity) kv("velocity", fmt17((*c.velocity)[0]) + ", " + fmt17((*c.velocity)[1]));
  kv("phi_start", fmt17(c.phi_start));
  if (c.dphi) kv("dphi", fmt17(*c.dphi));
  if (c.count) kv("count", std::to_string(*c.count));
  if (c.t_end) kv("t_end", fmt17(*c.t_end));
  {
    std::string t;
    for (std::size_t i = 0; i < c.times.size(); ++i) t += (i ? ", " : "") + fmt17(c.times[i]);
    kv("times", t);
  }
  if (!c.targets.empty()) {
    std::string t;
    for (std::size_t i = 0; i < c.targets.size(); ++i)
      t += (i ? "; " : "") + fmt17(c.targets[i][0]) + ' ' + fmt17(c.targets[i][1]);
    kv("targets", t);
  }
  kv("target_count", std::to_string(c.target_count));
  kv("target_time", fmt17(c.target_time));
  kv("full_scale", c.full_scale ? "true" : "false");
  kv("cloud_every", std::to_string(c.cloud_every));
  s += "\n[integrator]\n";
  kv("rel_tol", fmt17(c.integrator.rel_tol));
  kv("abs_tol", fmt17(c.integrator.abs_tol));
  kv("max_step", fmt17(c.integrator.max_step));
  kv("boundary_epsilon", fmt17(c.integrator.boundary_epsilon));
  kv("output_stride", fmt17(c.integrator.output_stride));
  kv("max_steps", std::to_string(c.integrator.max_steps));
  s += "\n[shooting]\n";
  kv("scan_samples", std::to_string(c.shooting.scan_samples));
  kv("tolerance", fmt17(c.shooting.tolerance));
  kv("t_max", fmt17(c.shooting.t_max));
  s += "\n[output]\n";
  kv("svg", c.svg ? "true" : "false");
  kv("wind_glyphs", c.wind_glyphs ? "true" : "false");
  if (!c.prefix.empty()) kv("prefix", c.prefix);
  return s;
}

namespace detail {

template <class T>
T checked(const io::ConfigDocument& doc, const io::ConfigEntry& e, const std::string& key, T (*parse)(std::string_view)) {
  try {
    return parse(e.value);
  } catch (const Error& err) {
    throw Error(ErrorKind::usage, doc.source + ":" + std::to_string(e.line) + ": " + key + ": " + err.what());
  }
}

inline std::size_t parse_count(std::string_view s) {
  const double v = io::parse_real(s);
  if (!(v >= 0.0) || v != std::floor(v)) throw Error(ErrorKind::usage, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline std::string parse_string(std::string_view s) { return std::string(s); }

}  // namespace detail

/// Applies a parsed configuration document on top of `c`; unknown sections
/// and keys are rejected with their line number.
inline void apply_config(const io::ConfigDocument& doc, RunConfig& c) {
  using detail::checked;
  using io::parse_bool;
  using io::parse_real;
  for (const auto& [section, keys] : doc.sections) {
    for (const auto& [key, e] : keys) {
      auto real = [&] { return checked(doc, e, key, parse_real); };
      auto count = [&] { return checked(doc, e, key, detail::parse_count); };
      auto boolean = [&] { return checked(doc, e, key, parse_bool); };
      auto unknown = [&] {
        throw Error(ErrorKind::usage,
                    doc.source + ":" + std::to_string(e.line) + ": unknown key '" + key + "' in [" + section + "]");
      };
      if (section == "scenario") {
        if (key == "id") c.scenario = e.value;
        else if (key == "wind_speed") c.wind_speed = real();
        else if (key == "ship_speed") c.ship_speed = real();
        else if (key == "origin_x") c.origin_x = real();
        else if (key == "origin_y") c.origin_y = real();
        else unknown();
      } else if (section == "run") {
        if (key == "experiment") {
          // Documents which subcommand the file is meant for; a mismatch is an error.
          if (checked(doc, e, key, parse_experiment) != c.experiment)
            throw Error(ErrorKind::usage, doc.source + ":" + std::to_string(e.line) + ": file is for '" + e.value +
                                              "', not '" + std::string(to_string(c.experiment)) + "'");
        } else if (key == "metric") c.metric = checked(doc, e, key, parse_metric_choice);
        else if (key == "phi0") c.phi0 = real();
        else if (key == "velocity") {
          const auto v = checked(doc, e, key, io::parse_real_list);
          if (v.size() != 2)
            throw Error(ErrorKind::usage, doc.source + ":" + std::to_string(e.line) + ": velocity needs two components");
          c.velocity = Vec<double, 2>{v[0], v[1]};
        } else if (key == "phi_start") c.phi_start = real();
        else if (key == "dphi") c.dphi = real();
        else if (key == "count") c.count = count();
        else if (key == "t_end") c.t_end = real();
        else if (key == "times") c.times = checked(doc, e, key, io::parse_real_list);
        else if (key == "targets") c.targets = checked(doc, e, key, io::parse_point_list);
        else if (key == "target_count") c.target_count = count();
        else if (key == "target_time") c.target_time = real();
        else if (key == "full_scale") c.full_scale = boolean();
        else if (key == "cloud_every") c.cloud_every = count();
        else unknown();
      } else if (section == "integrator") {
        if (key == "rel_tol") c.integrator.rel_tol = real();
        else if (key == "abs_tol") c.integrator.abs_tol = real();
        else if (key == "max_step") c.integrator.max_step = real();
        else if (key == "boundary_epsilon") c.integrator.boundary_epsilon = real();
        else if (key == "output_stride") c.integrator.output_stride = real();
        else if (key == "max_steps") c.integrator.max_steps = count();
        else unknown();
      } else if (section == "shooting") {
        if (key == "scan_samples") c.shooting.scan_samples = count();
        else if (key == "tolerance") c.shooting.tolerance = real();
        else if (key == "t_max") c.shooting.t_max = real();
        else unknown();
      } else if (section == "output") {
        if (key == "svg") c.svg = boolean();
        else if (key == "wind_glyphs") c.wind_glyphs = boolean();
        else if (key == "prefix") c.prefix = checked(doc, e, key, detail::parse_string);
        else unknown();
      } else {
        throw Error(ErrorKind::usage,
                    doc.source + ":" + std::to_string(e.line) + ": unknown section [" + section + "]");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Drivers

struct RunSummary {
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<std::string> warnings;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  bool numerical_failure = false;
  std::string failure;
};

namespace detail {

inline std::string out_name(const RunConfig& c, const std::string& stem, const std::string& ext) {
  return (c.prefix.empty() ? std::string() : c.prefix + "_") + stem + ext;
}

inline void emit(const std::filesystem::path& dir, RunSummary& sum, const std::string& name, const std::string& text) {
  io::write_text(dir / name, text);
  sum.outputs.push_back(name);
}

inline FanSpec fan_spec_of(const RunConfig& c, const Scenario& sc, ExampleMetric m) {
  FanSpec s;
  s.origin = sc.origin;
  s.phi_start = c.phi_start;
  s.phi_step = *c.dphi;
  s.count = *c.count;
  s.t_end = *c.t_end;
  s.metric = m;
  return s;
}

inline nlohmann::ordered_json fan_details(const Fan& fan) {
  nlohmann::ordered_json j;
  j["rays"] = fan.rays.size();
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : fan.skipped) skipped.push_back({{"phi0", s.phi0}, {"reason", s.reason}});
  j["skipped"] = skipped;
  nlohmann::ordered_json tally = nlohmann::ordered_json::object();
  for (const auto& [r, n] : fan.terminal_tally()) tally[std::string(to_string(r))] = n;
  j["terminal"] = tally;
  double drift = 0.0;
  for (const auto& r : fan.rays) drift = std::max(drift, r.trajectory.max_speed_drift());
  j["max_speed_drift"] = drift;
  return j;
}

inline bool has_step_failure(const Fan& fan) {
  for (const auto& r : fan.rays)
    if (r.trajectory.terminal_reason == TerminalReason::step_failure) return true;
  return false;
}

inline void add_winds(io::PlotSpec& plot, const RunConfig& c, const Scenario& sc) {
  if (!c.wind_glyphs) return;
  if (c.metric != MetricChoice::generalized) plot.winds.push_back({sc.original, io::SeriesStyle::original, false});
  if (c.metric != MetricChoice::original) plot.winds.push_back({sc.generalized, io::SeriesStyle::generalized, false});
}

inline void run_eval(const RunConfig& c, const Scenario& sc, const std::filesystem::path& dir, RunSummary& sum) {
  using io::fmt17;
  std::string csv = "metric,x,y,vx,vy,F_value,beta,speed,ax,ay\n";
  for (auto m : metrics_of(c.metric)) {
    const auto& nav = m == ExampleMetric::original ? sc.original : sc.generalized;
    const KropinaMetric<2> k(nav);
    const auto v = c.velocity ? *c.velocity : initial_state(nav, c.phi0, sc.origin, c.integrator.boundary_epsilon).v;
    const double f = k(sc.origin, v);
    const auto d = geodesic_rhs(k, sc.origin, v);
    csv += std::string(to_string(m)) + ',' + fmt17(sc.origin[0]) + ',' + fmt17(sc.origin[1]) + ',' + fmt17(v[0]) +
           ',' + fmt17(v[1]) + ',' + fmt17(f) + ',' + fmt17(k.beta(sc.origin, v)) + ',' +
           fmt17(nav.speed(sc.origin)) + ',' + fmt17(d.acceleration[0]) + ',' + fmt17(d.acceleration[1]) + '\n';
  }
  emit(dir, sum, out_name(c, "eval", ".csv"), csv);
  if (c.svg) {
    // Wind field: magnitude shading with direction glyphs.
    io::PlotSpec plot;
    plot.title = "wind field";
    plot.bounds = std::array<double, 4>{-5.0, 5.0, -5.0, 5.0};
    plot.glyphs = 25;
    plot.winds.push_back({sc.generalized, io::SeriesStyle::generalized, true});
    emit(dir, sum, out_name(c, "wind_field", ".svg"), io::render_svg(plot));
  }
}

inline void run_fan(const RunConfig& c, const Scenario& sc, const std::filesystem::path& dir, RunSummary& sum,
                    const std::string& stem) {
  io::PlotSpec plot;
  plot.title = stem;
  add_winds(plot, c, sc);
  for (auto m : metrics_of(c.metric)) {
    const auto fan = generate_fan(sc, fan_spec_of(c, sc, m), c.integrator);
    const auto rows = io::trajectory_rows(fan);
    emit(dir, sum, out_name(c, "trajectories_" + std::string(to_string(m)), ".csv"), io::format_trajectory_csv(rows));
    plot.series.push_back(io::series_from_rows(rows, io::style_of(m)));
    sum.details[std::string(to_string(m))] = fan_details(fan);
    if (has_step_failure(fan)) {
      sum.numerical_failure = true;
      sum.failure = "step failure on a " + std::string(to_string(m)) + " ray";
    }
    if (c.experiment == Experiment::geodesic && fan.rays.empty() && !fan.skipped.empty())
    {
      std::string why = fan.skipped.front().reason;
      const std::string prefix = std::string(to_string(ErrorKind::excluded_heading)) + " error: ";
      if (why.starts_with(prefix)) why.erase(0, prefix.size());
      throw Error(ErrorKind::excluded_heading, why);
    }
  }
  if (c.svg) emit(dir, sum, out_name(c, stem, ".svg"), io::render_svg(plot));
}

inline void run_isochrone(const RunConfig& c, const Scenario& sc, const std::filesystem::path& dir,
                          RunSummary& sum) {
  io::PlotSpec plot;
  plot.title = "isochrones";
  std::map<ExampleMetric, std::vector<Isochrone>> by_metric;
  for (auto m : metrics_of(c.metric)) {
    const auto fan = generate_fan(sc, fan_spec_of(c, sc, m), c.integrator);
    auto isos = isochrones_from_fan(fan, c.times);
    emit(dir, sum, out_name(c, "isochrones_" + std::string(to_string(m)), ".csv"), io::format_isochrone_csv(isos));
    auto d = fan_details(fan);
    auto excluded = nlohmann::ordered_json::object();
    for (const auto& iso : isos) excluded[io::fmt17(iso.t)] = iso.excluded;
    d["excluded_per_time"] = excluded;
    sum.details[std::string(to_string(m))] = d;
    if (has_step_failure(fan)) {
      sum.numerical_failure = true;
      sum.failure = "step failure on a " + std::string(to_string(m)) + " ray";
    }
    for (const auto& iso : isos) {
      io::PlotIsochrone pi;
      pi.style = io::style_of(m);
      pi.t = iso.t;
      pi.points = as_polygon(iso);
      plot.isochrones.push_back(std::move(pi));
    }
    by_metric[m] = std::move(isos);
  }
  if (by_metric.size() == 2) {
    auto nest = nlohmann::ordered_json::object();
    const auto& g = by_metric[ExampleMetric::generalized];
    const auto& o = by_metric[ExampleMetric::original];
    for (std::size_t i = 0; i < g.size(); ++i) nest[io::fmt17(g[i].t)] = nesting_violations(g[i], o[i], 1e-9);
    sum.details["nesting_violations"] = nest;
  }
  if (c.svg) emit(dir, sum, out_name(c, "isochrones", ".svg"), io::render_svg(plot));
}

inline void run_reachable(const RunConfig& c, const Scenario& sc, const std::filesystem::path& dir,
                          RunSummary& sum) {
  const auto m = c.metric == MetricChoice::original ? ExampleMetric::original : ExampleMetric::generalized;
  const auto fan = generate_fan(sc, fan_spec_of(c, sc, m), c.integrator);
  const auto rs = reachable_set(fan, c.cloud_every);
  emit(dir, sum, out_name(c, "reachable_cloud", ".csv"), io::format_points_csv(rs.cloud));
  emit(dir, sum, out_name(c, "reachable_boundary", ".csv"), io::format_polylines_csv(rs.boundary));
  {
    std::string csv = "ray_id,phi0,t,x,y,terminal\n";
    for (const auto& r : fan.rays) {
      const auto& end = r.trajectory.samples.back();
      csv += std::to_string(r.id) + ',' + io::fmt17(r.phi0) + ',' + io::fmt17(end.t) + ',' + io::fmt17(end.x[0]) +
             ',' + io::fmt17(end.x[1]) + ',' + std::string(to_string(r.trajectory.terminal_reason)) + '\n';
    }
    emit(dir, sum, out_name(c, "reachable_endpoints", ".csv"), csv);
  }
  auto d = fan_details(fan);
  d["metric"] = std::string(to_string(m));
  d["cloud_points"] = rs.cloud.size();
  d["alpha_radius"] = rs.alpha_radius;
  d["boundary_polylines"] = rs.boundary.size();
  sum.details["reachable"] = d;
  if (has_step_failure(fan)) {
    sum.numerical_failure = true;
    sum.failure = "step failure on a ray of the sweep";
  }
  if (c.svg) {
    io::PlotSpec plot;
    plot.title = "reachable set";
    plot.cloud = rs.cloud;
    plot.boundary = rs.boundary;
    emit(dir, sum, out_name(c, "reachable", ".svg"), io::render_svg(plot));
  }
}

inline void run_compare(const RunConfig& c, const Scenario& sc, const std::filesystem::path& dir, RunSummary& sum) {
  auto targets = c.targets;
  if (targets.empty()) {
    FanSpec spec = fan_spec_of(c, sc, ExampleMetric::generalized);
    spec.t_end = c.target_time;
    targets = targets_on_fan(generate_fan(sc, spec, c.integrator), c.target_time, c.target_count);
  }
  ShootingConfig sh = c.shooting;
  sh.integrator = c.integrator;
  const auto rows = compare_travel_times(sc, sc.origin, targets, sh);
  emit(dir, sum, out_name(c, "comparison", ".csv"), io::format_comparison_csv(rows));
  std::size_t complete = 0, holds = 0;
  for (const auto& r : rows)
    if (r.complete()) {
      ++complete;
      if (r.generalized->travel_time >= r.original->travel_time - 1e-6) ++holds;
    }
  if (complete < rows.size()) emit(dir, sum, out_name(c, "comparison_excluded", ".csv"), io::format_excluded_csv(rows));
  sum.details["targets"] = rows.size();
  sum.details["complete"] = complete;
  sum.details["generalized_not_faster"] = holds;
}

}  // namespace detail

/// Runs one experiment (anything but verify) and writes its files into `dir`.
/// Errors propagate; numerical trouble on individual rays is reported in the summary.
inline RunSummary run_experiment(const RunConfig& resolved, const std::filesystem::path& dir) {
  RunSummary sum;
  const auto sc = build_scenario(resolved);
  switch (resolved.experiment) {
    case Experiment::eval: detail::run_eval(resolved, sc, dir, sum); break;
    case Experiment::geodesic: detail::run_fan(resolved, sc, dir, sum, "geodesic"); break;
    case Experiment::fan: detail::run_fan(resolved, sc, dir, sum, "fan"); break;
    case Experiment::isochrone: detail::run_isochrone(resolved, sc, dir, sum); break;
    case Experiment::reachable: detail::run_reachable(resolved, sc, dir, sum); break;
    case Experiment::compare: detail::run_compare(resolved, sc, dir, sum); break;
    case Experiment::verify: throw Error(ErrorKind::usage, "verify is run by the verification driver");
  }
  return sum;
}

/// Parameter sets of the published figures, desk scale for the reachable set.
struct FigureRun {
  std::string id;
  RunConfig config;
};

inline std::vector<FigureRun> figure_runs() {
  constexpr double pi = std::numbers::pi;
  std::vector<FigureRun> runs;
  auto add = [&](std::string id, Experiment e, MetricChoice m, std::optional<double> dphi, std::optional<double> t) {
    RunConfig c;
    c.experiment = e;
    c.metric = m;
    c.dphi = dphi;
    c.t_end = t;
    c.svg = true;
    c.prefix = id;
    runs.push_back({std::move(id), c});
  };
  add("fig1", Experiment::eval, MetricChoice::generalized, std::nullopt, std::nullopt);
  add("fig2_original", Experiment::fan, MetricChoice::original, pi / 8, 10.0);
  add("fig2_generalized", Experiment::fan, MetricChoice::generalized, pi / 8, 10.0);
  add("fig3_left", Experiment::fan, MetricChoice::both, pi / 18, 3.0);
  add("fig3_right", Experiment::fan, MetricChoice::both, pi / 8, 10.0);
  add("fig4_left", Experiment::isochrone, MetricChoice::both, pi / 180, std::nullopt);
  add("fig4_right", Experiment::reachable, MetricChoice::generalized, std::nullopt, std::nullopt);
  return runs;
}

}  // namespace kropina
